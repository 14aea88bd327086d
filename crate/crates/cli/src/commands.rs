//! One function per subcommand. Every command validates its configuration,
//! evaluates the sweep (in parallel where cells are independent) and writes
//! a data table plus a run manifest.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use triwalk_core::acceptance::{run_criteria, CriterionOutcome};
use triwalk_core::criticality::{critical_exponents, default_exponent_distances, oz_fit_at};
use triwalk_core::observables::{
    critical_winding, critical_winding_vector_trace, loop_count, velocity_profile,
    wannier_correlation, winding_vector_trace,
};
use triwalk_core::phase_topology::{
    critical_lines, dispersion_exponent_at, line_by_name, multicritical_points, phase_diagram,
    CriticalLine,
};
use triwalk_core::rg_flow::{
    classify_flow_points, rg_rhs_closed, rg_rhs_numeric, DEFAULT_H_K, DEFAULT_H_THETA,
};
use triwalk_core::walk_core::CoinAngles;

use crate::config::ScanConfig;
use crate::output::{write_outputs, Cell, Table};

/// Command failure carrying its process exit code.
#[derive(Debug)]
pub enum CommandError {
    Config(String),
    Io(String),
    Fit(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) => crate::exit_codes::CONFIG_ERROR,
            CommandError::Io(_) => crate::exit_codes::IO_ERROR,
            CommandError::Fit(_) => crate::exit_codes::FIT_FAILURE,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Config(m) => write!(f, "config error: {m}"),
            CommandError::Io(m) => write!(f, "i/o error: {m}"),
            CommandError::Fit(m) => write!(f, "fit failure: {m}"),
        }
    }
}

impl std::error::Error for CommandError {}

fn config_err(e: impl fmt::Display) -> CommandError {
    CommandError::Config(e.to_string())
}

fn line_of(cfg: &ScanConfig) -> Result<CriticalLine, CommandError> {
    line_by_name(&cfg.line).ok_or_else(|| {
        CommandError::Config(format!(
            "unknown line {:?} (expected red1..red3, blue1, blue2, op1..op3)",
            cfg.line
        ))
    })
}

fn sweep_points(line: &CriticalLine, cfg: &ScanConfig) -> Result<Vec<f64>, CommandError> {
    let (lo, hi) = cfg.theta1_range.unwrap_or(line.theta1_domain);
    if lo < line.theta1_domain.0 - 1e-12 || hi > line.theta1_domain.1 + 1e-12 {
        return Err(CommandError::Config(format!(
            "theta1-range ({lo}, {hi}) outside domain of {}",
            line.name
        )));
    }
    if cfg.steps < 2 {
        return Err(CommandError::Config("steps must be at least 2".into()));
    }
    Ok((0..cfg.steps)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / cfg.steps as f64)
        .collect())
}

fn finish(
    table: Table,
    cfg: &ScanConfig,
    command: &str,
    started: Instant,
    summary: BTreeMap<String, serde_json::Value>,
) -> Result<(), CommandError> {
    write_outputs(
        &table,
        cfg.format,
        &cfg.output,
        command,
        cfg.echo(),
        started.elapsed().as_secs_f64(),
        summary,
    )
    .map_err(|e| CommandError::Io(e.to_string()))
}

/// `phase-diagram`: per-cell winding (or NA when gapless), minimum gap and
/// nearest critical line over the (θ₁, θ₂) torus.
pub fn cmd_phase_diagram(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let pd = phase_diagram(cfg.resolution, cfg.k_grid).map_err(config_err)?;
    let lines = critical_lines();
    let mut table = Table::new(vec!["theta1", "theta2", "w", "min_gap", "line_id"]);
    for cell in &pd.cells {
        table.push(vec![
            Cell::F(cell.theta1),
            Cell::F(cell.theta2),
            cell.w.map(|w| Cell::I(w as i64)).unwrap_or(Cell::Na),
            Cell::F(cell.min_gap),
            Cell::S(lines[cell.nearest_line].name.to_string()),
        ]);
    }
    finish(table, cfg, "phase-diagram", started, BTreeMap::new())
}

/// `critical-scan`: curvature-peak parameters and the gapless winding
/// number along one critical line.
pub fn cmd_critical_scan(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let line = line_of(cfg)?;
    let mut table = Table::new(vec![
        "theta1c", "theta2", "f_peak", "xi_c", "r_squared", "oz_source", "w_c_raw", "w_c",
        "closings",
    ]);
    for theta1 in sweep_points(&line, cfg)? {
        let oz = oz_fit_at(&line, theta1, cfg.k0);
        let (f_peak, xi_c, r2, source) = match &oz {
            Ok(fit) => (
                Cell::F(fit.f_peak),
                Cell::F(fit.xi_c),
                Cell::F(fit.r_squared),
                Cell::S("fitted".into()),
            ),
            Err(_) => match wannier_correlation(&line, theta1, cfg.k0, 0) {
                Ok(series) => (
                    Cell::F(series.f_peak),
                    Cell::F(series.xi_c),
                    Cell::Na,
                    Cell::S("analytic".into()),
                ),
                Err(_) => (Cell::Na, Cell::Na, Cell::Na, Cell::Na),
            },
        };
        let (w_raw, w_c, closings) =
            match critical_winding(&line, theta1, cfg.delta, cfg.k_grid.max(4096)) {
                Ok(wc) => (
                    Cell::F(wc.w_c_raw),
                    Cell::I(wc.w_c as i64),
                    Cell::S(
                        wc.excluded
                            .iter()
                            .map(|k| format!("{k:.6}"))
                            .collect::<Vec<_>>()
                            .join(";"),
                    ),
                ),
                Err(_) => (Cell::Na, Cell::Na, Cell::S(String::new())),
            };
        table.push(vec![
            Cell::F(theta1),
            Cell::F(line.map(theta1)),
            f_peak,
            xi_c,
            r2,
            source,
            w_raw,
            w_c,
            closings,
        ]);
    }
    finish(table, cfg, "critical-scan", started, BTreeMap::new())
}

/// `exponents`: γ, ν and z for the transition-hosting multicritical points.
pub fn cmd_exponents(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let pi = std::f64::consts::PI;
    let cases = [
        ("red2", 2.0 * pi / 3.0),
        ("red2", -2.0 * pi / 3.0),
        ("blue1", pi / 3.0),
        ("blue1", -pi / 3.0),
        ("op1", 0.0),
    ];
    let distances = default_exponent_distances();
    let points = multicritical_points();
    let mut table = Table::new(vec![
        "line", "mc_theta1", "gamma", "nu", "gamma_stderr", "nu_stderr", "z",
    ]);
    for (name, mc_theta1) in cases {
        let line = line_by_name(name).unwrap();
        let mc = points
            .iter()
            .find(|p| {
                (p.angles.theta1() - mc_theta1).abs() < 1e-9
                    && (p.angles.theta2() - line.map(mc_theta1)).abs() < 1e-9
            })
            .ok_or_else(|| CommandError::Config(format!("no catalog point at {mc_theta1}")))?;
        let fit = critical_exponents(&line, mc, &distances)
            .map_err(|e| CommandError::Fit(format!("{name} at {mc_theta1:.4}: {e}")))?;
        let z = dispersion_exponent_at(mc.angles, mc.gap_closing_momenta[0].k0, 0.05)
            .map_err(|e| CommandError::Fit(format!("z fit at {mc_theta1:.4}: {e}")))?;
        table.push(vec![
            Cell::S(name.into()),
            Cell::F(mc_theta1),
            Cell::F(fit.gamma),
            Cell::F(fit.nu),
            Cell::F(fit.gamma_stderr),
            Cell::F(fit.nu_stderr),
            Cell::F(z),
        ]);
    }
    finish(table, cfg, "exponents", started, BTreeMap::new())
}

/// `rg-flow`: closed-form and finite-difference flow along one family,
/// with the classified fixed and unstable points in the manifest.
pub fn cmd_rg_flow(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let line = line_of(cfg)?;
    let family = line.family;
    let mut table = Table::new(vec!["theta1c", "rhs_closed", "rhs_numeric", "rel_diff"]);
    for theta1 in sweep_points(&line, cfg)? {
        let closed = rg_rhs_closed(family, theta1);
        let numeric = rg_rhs_numeric(&line, theta1, 0.0, DEFAULT_H_K, DEFAULT_H_THETA);
        let (cc, nc, rc) = match (&closed, &numeric) {
            (Ok(c), Ok(n)) if n.is_finite() => (
                Cell::F(*c),
                Cell::F(*n),
                Cell::F((n - c).abs() / (1.0 + c.abs())),
            ),
            (Ok(c), _) => (Cell::F(*c), Cell::Na, Cell::Na),
            (Err(_), Ok(n)) if n.is_finite() => (Cell::Na, Cell::F(*n), Cell::Na),
            _ => (Cell::Na, Cell::Na, Cell::Na),
        };
        table.push(vec![Cell::F(theta1), cc, nc, rc]);
    }
    let fp = classify_flow_points(family, cfg.resolution.max(2048)).map_err(config_err)?;
    let mut summary = BTreeMap::new();
    summary.insert("fixed_points".into(), serde_json::json!(fp.fixed));
    summary.insert("unstable_points".into(), serde_json::json!(fp.unstable));
    finish(table, cfg, "rg-flow", started, summary)
}

fn approach_theta(line: &CriticalLine, mc_theta1: f64, offset: f64) -> f64 {
    let below = mc_theta1 - offset;
    if line.in_gapless_subdomain(below) {
        below
    } else {
        mc_theta1 + offset
    }
}

/// `wannier`: correlation decay at several offsets from a multicritical
/// angle (long format: one row per offset and distance R).
pub fn cmd_wannier(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let line = line_of(cfg)?;
    let mut table = Table::new(vec![
        "offset", "theta1c", "r", "lambda_re", "lambda_im", "lambda_abs",
    ]);
    let mut xi_summary = Vec::new();
    for &offset in &cfg.offsets {
        let theta1 = approach_theta(&line, cfg.mc_theta1, offset);
        let series = wannier_correlation(&line, theta1, cfg.k0, cfg.r_max)
            .map_err(|e| CommandError::Fit(format!("offset {offset}: {e}")))?;
        xi_summary.push(serde_json::json!({
            "offset": offset,
            "xi_c": series.xi_c,
            "f_peak": series.f_peak,
        }));
        for (&r, lam) in series.r_values.iter().zip(&series.lambda) {
            table.push(vec![
                Cell::F(offset),
                Cell::F(theta1),
                Cell::I(r as i64),
                Cell::F(lam.re),
                Cell::F(lam.im),
                Cell::F(lam.norm()),
            ]);
        }
    }
    let mut summary = BTreeMap::new();
    summary.insert("oz_parameters".into(), serde_json::Value::Array(xi_summary));
    finish(table, cfg, "wannier", started, summary)
}

/// `velocity`: group-velocity profile of both bands at fixed coin angles.
pub fn cmd_velocity(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let angles = CoinAngles::new(cfg.theta1, cfg.theta2);
    let profile = velocity_profile(angles, cfg.k_grid.max(1024)).map_err(config_err)?;
    let mut table = Table::new(vec!["k", "v_plus", "v_minus"]);
    for &(k, v) in &profile.samples {
        table.push(vec![Cell::F(k), Cell::F(v), Cell::F(-v)]);
    }
    let mut summary = BTreeMap::new();
    summary.insert(
        "span".into(),
        serde_json::json!([profile.span.0, profile.span.1]),
    );
    summary.insert(
        "discontinuities".into(),
        serde_json::json!(profile.discontinuities),
    );
    finish(table, cfg, "velocity", started, summary)
}

/// `winding-trace`: normalized winding-vector samples, either for a gapped
/// walk (θ₁, θ₂) or on a critical line when `theta1c` is set.
pub fn cmd_winding_trace(cfg: &ScanConfig) -> Result<(), CommandError> {
    let started = Instant::now();
    let trace = match cfg.theta1c {
        Some(theta1c) => {
            let line = line_of(cfg)?;
            critical_winding_vector_trace(&line, theta1c, cfg.delta, cfg.k_grid.max(1024))
                .map_err(config_err)?
        }
        None => winding_vector_trace(CoinAngles::new(cfg.theta1, cfg.theta2), cfg.k_grid.max(1024)),
    };
    let loops = loop_count(&trace);
    let mut table = Table::new(vec!["k", "n2", "n3"]);
    for s in &trace {
        table.push(vec![Cell::F(s.k), Cell::F(s.n2), Cell::F(s.n3)]);
    }
    let mut summary = BTreeMap::new();
    summary.insert("loop_count".into(), serde_json::json!(loops));
    finish(table, cfg, "winding-trace", started, summary)
}

/// Determinism criterion: an identical configuration renders byte-identical
/// data tables across two independent (parallel) evaluations.
pub fn criterion_cli_determinism() -> CriterionOutcome {
    let started = Instant::now();
    let render = || {
        let pd = phase_diagram(64, 512).unwrap();
        let lines = critical_lines();
        let mut table = Table::new(vec!["theta1", "theta2", "w", "min_gap", "line_id"]);
        for cell in &pd.cells {
            table.push(vec![
                Cell::F(cell.theta1),
                Cell::F(cell.theta2),
                cell.w.map(|w| Cell::I(w as i64)).unwrap_or(Cell::Na),
                Cell::F(cell.min_gap),
                Cell::S(lines[cell.nearest_line].name.to_string()),
            ]);
        }
        table.render(crate::config::Format::Csv)
    };
    let first = render();
    let second = render();
    let passed = first == second;
    CriterionOutcome {
        id: "C11",
        name: "CLI output determinism",
        passed,
        detail: if passed {
            format!("{} bytes, byte-identical re-render", first.len())
        } else {
            "re-rendered output differs".into()
        },
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// `acceptance`: run (or list) every criterion; returns overall success.
pub fn cmd_acceptance(list: bool, only: Option<&str>) -> bool {
    let core_criteria = triwalk_core::acceptance::criteria();
    if list {
        for (id, name, _) in &core_criteria {
            println!("{id}  {name}");
        }
        println!("C11  CLI output determinism");
        return true;
    }
    let mut outcomes = run_criteria(only);
    let include_determinism = only
        .map(|f| "C11".contains(f) || "CLI output determinism".contains(f))
        .unwrap_or(true);
    if include_determinism {
        outcomes.push(criterion_cli_determinism());
    }
    let mut all_passed = true;
    for o in &outcomes {
        println!(
            "[{}] {} {} ({:.1}s){}{}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.seconds,
            if o.detail.is_empty() { "" } else { " - " },
            o.detail
        );
        all_passed &= o.passed;
    }
    if outcomes.is_empty() {
        println!("no criteria match the filter");
        return false;
    }
    all_passed
}
