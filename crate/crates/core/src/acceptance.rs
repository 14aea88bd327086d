//! Acceptance suite: every reproduction target of the toolkit, with pinned
//! tolerances and wall-clock budgets, runnable from tests or the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

use crate::criticality::{
    closed_form_curvature, critical_bloch, critical_exponents, curvature_function,
    curvature_or_limit, default_exponent_distances, signed_peak_near, swap_detector,
};
use crate::observables::{
    critical_winding, group_velocity, wannier_correlation, wannier_correlation_numeric, Band,
};
use crate::phase_topology::{
    critical_lines, line_by_name, multicritical_points, phase_diagram, CriticalLine,
    DispersionKind, LineFamily,
};
use crate::rg_flow::{
    classify_flow_points, rg_rhs_closed, rg_rhs_numeric, DEFAULT_H_K, DEFAULT_H_THETA,
};
use crate::walk_core::{
    alpha, bloch_vector, chiral_check, gap_at, walk_unitary, CoinAngles, Momentum,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.failures.push(msg.into());
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn finish(self, id: &'static str, name: &'static str, started: Instant) -> CriterionOutcome {
        let seconds = started.elapsed().as_secs_f64();
        let passed = self.failures.is_empty();
        let detail = if passed {
            self.notes.join("; ")
        } else {
            self.failures.join("; ")
        };
        CriterionOutcome {
            id,
            name,
            passed,
            detail,
            seconds,
        }
    }
}

/// Criterion 1: 201×201 phase diagram, 4096-point windings; gapped cells
/// carry w ∈ {-3,-1,1,3} with |w_raw - w| < 1e-3; the gapless set hugs the
/// eight critical lines within one grid cell; w changes only across gapless
/// cells; runtime < 60 s.
pub fn criterion_phase_diagram() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    match phase_diagram(201, 4096) {
        Err(e) => c.require(false, format!("phase diagram failed: {e}")),
        Ok(pd) => {
            let mut worst_residual: f64 = 0.0;
            let mut gapless_cells = 0usize;
            for cell in &pd.cells {
                match (cell.w, cell.w_raw) {
                    (Some(w), Some(raw)) => {
                        c.require(
                            [-3, -1, 1, 3].contains(&w),
                            format!("w = {w} at ({}, {})", cell.theta1, cell.theta2),
                        );
                        worst_residual = worst_residual.max((raw - w as f64).abs());
                    }
                    _ => {
                        gapless_cells += 1;
                        c.require(
                            cell.line_distance <= pd.h + 1e-12,
                            format!(
                                "gapless cell ({}, {}) at distance {} > h",
                                cell.theta1, cell.theta2, cell.line_distance
                            ),
                        );
                    }
                }
            }
            c.require(
                worst_residual < 1e-3,
                format!("worst |w_raw - w| = {worst_residual:e}"),
            );
            c.note(format!(
                "worst residual {worst_residual:.2e}, {gapless_cells} gapless cells"
            ));
            // every line, densely sampled, lands in a gapless-flagged cell
            let to_index = |x: f64| -> usize {
                (((x + PI) / pd.h).round() as isize).clamp(0, 200) as usize
            };
            for line in critical_lines() {
                for s in 0..400 {
                    let t1 = line.theta1_domain.0
                        + (line.theta1_domain.1 - line.theta1_domain.0) * s as f64 / 399.0;
                    let t2 = line.map(t1);
                    // orange/purple lines are gapped (hence not critical)
                    // where |cos θ₁| < 1/2; only the gapless subset counts
                    if t2.abs() > PI || !line.in_gapless_subdomain(t1) {
                        continue;
                    }
                    let cell = pd.cell(to_index(t1), to_index(t2));
                    c.require(
                        cell.w.is_none(),
                        format!("line {} point ({t1:.4}, {t2:.4}) not flagged gapless", line.name),
                    );
                }
            }
            // winding changes only across flagged cells
            let res = pd.resolution;
            let mut violations = 0;
            for i in 0..res {
                for j in 0..res - 1 {
                    let (a, b) = (pd.cell(i, j), pd.cell(i, j + 1));
                    if let (Some(wa), Some(wb)) = (a.w, b.w) {
                        if wa != wb {
                            violations += 1;
                        }
                    }
                    let (a, b) = (pd.cell(j, i), pd.cell(j + 1, i));
                    if let (Some(wa), Some(wb)) = (a.w, b.w) {
                        if wa != wb {
                            violations += 1;
                        }
                    }
                }
            }
            c.require(
                violations == 0,
                format!("{violations} adjacent gapped cells with different w"),
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 60.0, format!("runtime {elapsed:.1}s exceeds 60s"));
    c.finish("C1", "phase diagram quantization and gapless geometry", started)
}

/// Criterion 2: exactly 8 quadratic + 5 linear multicritical points from
/// pairwise line intersections; fitted z within 5% of 2 and 1; < 10 s.
pub fn criterion_multicritical_catalog() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let points = multicritical_points();
    c.require(points.len() == 13, format!("{} points", points.len()));
    let quad_expect = [
        (-2.0 * PI / 3.0, -2.0 * PI / 3.0),
        (-2.0 * PI / 3.0, PI / 3.0),
        (-PI / 3.0, -PI / 3.0),
        (-PI / 3.0, 2.0 * PI / 3.0),
        (PI / 3.0, -2.0 * PI / 3.0),
        (PI / 3.0, PI / 3.0),
        (2.0 * PI / 3.0, -PI / 3.0),
        (2.0 * PI / 3.0, 2.0 * PI / 3.0),
    ];
    let lin_expect = [(0.0, 0.0), (PI, 0.0), (-PI, 0.0), (0.0, PI), (0.0, -PI)];
    let find = |t1: f64, t2: f64| {
        points.iter().find(|p| {
            (p.angles.theta1() - t1).abs() < 1e-9 && (p.angles.theta2() - t2).abs() < 1e-9
        })
    };
    for (t1, t2) in quad_expect {
        match find(t1, t2) {
            None => c.require(false, format!("missing quadratic point ({t1:.4}, {t2:.4})")),
            Some(p) => {
                c.require(
                    p.kind == DispersionKind::Quadratic,
                    format!("({t1:.4}, {t2:.4}) not quadratic"),
                );
                c.require(
                    (p.z - 2.0).abs() <= 0.1,
                    format!("z = {} at ({t1:.4}, {t2:.4})", p.z),
                );
            }
        }
    }
    for (t1, t2) in lin_expect {
        match find(t1, t2) {
            None => c.require(false, format!("missing linear point ({t1:.4}, {t2:.4})")),
            Some(p) => {
                c.require(
                    p.kind == DispersionKind::Linear,
                    format!("({t1:.4}, {t2:.4}) not linear"),
                );
                c.require(
                    (p.z - 1.0).abs() <= 0.05,
                    format!("z = {} at ({t1:.4}, {t2:.4})", p.z),
                );
            }
        }
    }
    let zs: Vec<String> = points.iter().map(|p| format!("{:.3}", p.z)).collect();
    c.note(format!("z values: [{}]", zs.join(", ")));
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 10.0, format!("runtime {elapsed:.1}s exceeds 10s"));
    c.finish("C2", "multicritical catalog and dynamical exponents", started)
}

fn mc_on(line_name: &str, t1: f64) -> (CriticalLine, crate::phase_topology::MulticriticalPoint) {
    let line = line_by_name(line_name).unwrap();
    let mc = multicritical_points()
        .into_iter()
        .find(|p| {
            (p.angles.theta1() - t1).abs() < 1e-9
                && (line.map(t1) - p.angles.theta2()).abs() < 1e-9
        })
        .unwrap_or_else(|| panic!("no multicritical point at theta1 = {t1} on {line_name}"));
    (line, mc)
}

/// Criterion 3: γ, ν ∈ [0.95, 1.05] and |γ-ν| < 0.05 at the red ±2π/3,
/// blue ±π/3 and orange/purple 0 points, 20 log-spaced distances in
/// [1e-3, 1e-1]; < 30 s.
pub fn criterion_exponents() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let distances = default_exponent_distances();
    let cases = [
        ("red2", 2.0 * PI / 3.0),
        ("red2", -2.0 * PI / 3.0),
        ("blue1", PI / 3.0),
        ("blue1", -PI / 3.0),
        ("op1", 0.0),
    ];
    for (name, t1) in cases {
        let (line, mc) = mc_on(name, t1);
        match critical_exponents(&line, &mc, &distances) {
            Err(e) => c.require(false, format!("{name} at {t1:.4}: {e}")),
            Ok(fit) => {
                c.require(
                    (0.95..=1.05).contains(&fit.gamma),
                    format!("{name} at {t1:.4}: gamma = {:.4}", fit.gamma),
                );
                c.require(
                    (0.95..=1.05).contains(&fit.nu),
                    format!("{name} at {t1:.4}: nu = {:.4}", fit.nu),
                );
                c.require(
                    (fit.gamma - fit.nu).abs() < 0.05,
                    format!(
                        "{name} at {t1:.4}: |gamma - nu| = {:.4}",
                        (fit.gamma - fit.nu).abs()
                    ),
                );
                c.note(format!(
                    "{name}@{t1:.3}: gamma={:.3} nu={:.3}",
                    fit.gamma, fit.nu
                ));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 30.0, format!("runtime {elapsed:.1}s exceeds 30s"));
    c.finish("C3", "critical exponents gamma = nu = 1", started)
}

/// Signed peak height at distance d from a transition angle, measured at
/// the momentum family that actually diverges there.
fn transition_peak(line: &CriticalLine, mc_theta1: f64, signed_d: f64) -> f64 {
    let theta1 = mc_theta1 + signed_d;
    match line.family {
        LineFamily::OrangePurpleNhs => curvature_or_limit(line, theta1, 0.0).unwrap(),
        _ => {
            let quadratic = matches!(
                (line.family, mc_theta1.abs()),
                (LineFamily::RedHs, t) if (t - 2.0 * PI / 3.0).abs() < 1e-9
            ) || matches!(
                (line.family, mc_theta1.abs()),
                (LineFamily::BlueHs, t) if (t - PI / 3.0).abs() < 1e-9
            );
            if quadratic {
                curvature_or_limit(line, theta1, 0.0).unwrap()
            } else {
                // linear point on a red/blue line: the diverging peak sits
                // at a moving non-high-symmetry momentum near π/3
                signed_peak_near(line, theta1, PI / 3.0).unwrap()
            }
        }
    }
}

/// Criterion 4: the curvature peak flips sign across every
/// transition-hosting multicritical point and grows at least tenfold from
/// distance 1e-1 to 1e-3; < 10 s.
pub fn criterion_sign_flip_divergence() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    // (line, transition angle, sides usable within the square)
    let two_sided: [(&str, f64); 5] = [
        ("red2", 2.0 * PI / 3.0),
        ("red2", -2.0 * PI / 3.0),
        ("red2", 0.0),
        ("blue1", PI / 3.0),
        ("blue1", -PI / 3.0),
    ];
    for (name, mc) in two_sided {
        let line = line_by_name(name).unwrap();
        let below = transition_peak(&line, mc, -1e-3);
        let above = transition_peak(&line, mc, 1e-3);
        let far = transition_peak(&line, mc, -1e-1);
        c.require(
            below.signum() != above.signum(),
            format!("{name}@{mc:.3}: no sign flip ({below:.2} / {above:.2})"),
        );
        c.require(
            below.abs() >= 10.0 * far.abs(),
            format!(
                "{name}@{mc:.3}: |F(1e-3)| = {:.1} < 10 x |F(1e-1)| = {:.1}",
                below.abs(),
                far.abs()
            ),
        );
        c.note(format!(
            "{name}@{mc:.3}: F(-1e-3)={below:.0}, F(+1e-3)={above:.0}, ratio {:.0}",
            (below / far).abs()
        ));
    }
    // orange/purple linear points at 0 and the ±π wrap
    let op1 = line_by_name("op1").unwrap();
    for (mc, lo_side, hi_side) in [(0.0, -1e-3, 1e-3), (PI, -1e-3, -2.0 * PI + 1e-3)] {
        let below = curvature_or_limit(&op1, mc + lo_side, 0.0).unwrap();
        let above = curvature_or_limit(&op1, crate::numerics::wrap_angle(mc + hi_side), 0.0).unwrap();
        let far = curvature_or_limit(&op1, mc - 1e-1, 0.0).unwrap();
        c.require(
            below.signum() != above.signum(),
            format!("op1@{mc:.3}: no sign flip across the point"),
        );
        c.require(below.abs() >= 10.0 * far.abs(), format!("op1@{mc:.3}: weak divergence"));
    }
    // blue linear points at ±π: branch pair blue1 (π - ε) and blue2 (-π + ε)
    let blue1 = line_by_name("blue1").unwrap();
    let blue2 = line_by_name("blue2").unwrap();
    let b1 = signed_peak_near(&blue1, PI - 1e-3, PI / 3.0).unwrap();
    let b2 = signed_peak_near(&blue2, -PI + 1e-3, PI / 3.0).unwrap();
    let b1_far = signed_peak_near(&blue1, PI - 1e-1, PI / 3.0).unwrap();
    c.require(
        b1.signum() != b2.signum(),
        format!("blue ±π: no sign flip across the branch pair ({b1:.0} / {b2:.0})"),
    );
    c.require(b1.abs() >= 10.0 * b1_far.abs(), "blue ±π: weak divergence".to_string());
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 10.0, format!("runtime {elapsed:.1}s exceeds 10s"));
    c.finish("C4", "peak sign flip and tenfold divergence", started)
}

/// Criterion 5: near linear multicritical points the diverging peaks sit at
/// non-high-symmetry momenta along red/blue lines and at k₀ ∈ {0, ±π} along
/// orange/purple lines; suppressed families stay below 1e2 at distance 1e-3.
pub fn criterion_swapping() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let hs_cases = [
        ("red2", 0.0, 0.0),
        ("red1", 0.0, PI),
        ("red3", 0.0, -PI),
        ("blue1", PI, 0.0),
        ("blue2", -PI, 0.0),
    ];
    let points = multicritical_points();
    let find_mc = |t1: f64, t2: f64| {
        points
            .iter()
            .find(|p| {
                (p.angles.theta1() - t1).abs() < 1e-9 && (p.angles.theta2() - t2).abs() < 1e-9
            })
            .unwrap()
            .clone()
    };
    for (name, t1, t2) in hs_cases {
        let line = line_by_name(name).unwrap();
        let mc = find_mc(t1, t2);
        match swap_detector(&mc, &line, 1e-3) {
            Err(e) => c.require(false, format!("{name}: {e}")),
            Ok(r) => {
                c.require(
                    r.peaked_momenta
                        .iter()
                        .all(|&k| ![0.0, PI, -PI].iter().any(|h| (k - h).abs() < 1e-6)),
                    format!("{name}: high-symmetry momentum among peaks"),
                );
                c.require(
                    r.peaked_momenta.len() == 4,
                    format!("{name}: {} peaked momenta", r.peaked_momenta.len()),
                );
                c.require(
                    r.suppressed_magnitudes.iter().all(|&m| m < 1e2),
                    format!("{name}: suppressed magnitude above 1e2"),
                );
            }
        }
    }
    let nhs_cases = [
        ("op1", 0.0, 0.0),
        ("op2", -PI, 0.0),
        ("op2", 0.0, PI),
        ("op3", 0.0, -PI),
        ("op3", PI, 0.0),
    ];
    for (name, t1, t2) in nhs_cases {
        let line = line_by_name(name).unwrap();
        let mc = find_mc(t1, t2);
        match swap_detector(&mc, &line, 1e-3) {
            Err(e) => c.require(false, format!("{name}: {e}")),
            Ok(r) => {
                c.require(
                    r.peaked_momenta
                        .iter()
                        .all(|&k| [0.0, PI, -PI].iter().any(|h| (k - h).abs() < 1e-6)),
                    format!("{name}: non-high-symmetry momentum among peaks"),
                );
                c.require(
                    r.peaked_momenta.len() == 3,
                    format!("{name}: {} peaked momenta", r.peaked_momenta.len()),
                );
                c.require(
                    r.suppressed_magnitudes.iter().all(|&m| m < 1e2),
                    format!("{name}: suppressed magnitude above 1e2"),
                );
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 30.0, format!("runtime {elapsed:.1}s exceeds 30s"));
    c.finish("C5", "peak swapping at linear multicritical points", started)
}

/// Criterion 6: numeric and closed-form flow agree to 1e-4 relative off the
/// singular sets; zeros at {0, ±π/2, ±π} (red/blue) and {±π/2}
/// (orange/purple); poles at {±2π/3}, {±π/3}, {0, ±π}; all refined to 1e-6.
pub fn criterion_rg_flow() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    // Agreement grid. Excluded: pole neighborhoods, plus the degenerate
    // zeros where both flow derivatives vanish and the finite-difference
    // quotient is 0/0 (±π red, 0 blue, {0, ±π/2, ±π} orange/purple).
    let families = [
        ("red2", LineFamily::RedHs, vec![2.0 * PI / 3.0, -2.0 * PI / 3.0, PI, -PI]),
        ("blue1", LineFamily::BlueHs, vec![PI / 3.0, -PI / 3.0, 0.0]),
        (
            "op1",
            LineFamily::OrangePurpleNhs,
            vec![0.0, PI, -PI, PI / 2.0, -PI / 2.0],
        ),
    ];
    for (name, family, excluded) in &families {
        let line = line_by_name(name).unwrap();
        let mut worst: f64 = 0.0;
        let n = 120;
        for i in 0..n {
            let t = -PI + 2.0 * PI * (i as f64 + 0.5) / n as f64;
            if excluded.iter().any(|&x| (t - x).abs() < 0.08) {
                continue;
            }
            let closed = rg_rhs_closed(*family, t).unwrap();
            match rg_rhs_numeric(&line, t, 0.0, DEFAULT_H_K, DEFAULT_H_THETA) {
                Ok(numeric) => {
                    worst = worst.max((numeric - closed).abs() / (1.0 + closed.abs()));
                }
                Err(e) => c.require(false, format!("{name} numeric rhs at {t:.3}: {e}")),
            }
        }
        c.require(
            worst < 1e-4,
            format!("{name}: worst numeric/closed deviation {worst:e}"),
        );
        c.note(format!("{name}: worst rel dev {worst:.1e}"));
    }
    // zeros and poles
    let expect = [
        (
            LineFamily::RedHs,
            vec![-PI, -PI / 2.0, 0.0, PI / 2.0, PI],
            vec![-2.0 * PI / 3.0, 2.0 * PI / 3.0],
        ),
        (
            LineFamily::BlueHs,
            vec![-PI, -PI / 2.0, 0.0, PI / 2.0, PI],
            vec![-PI / 3.0, PI / 3.0],
        ),
        (
            LineFamily::OrangePurpleNhs,
            vec![-PI / 2.0, PI / 2.0],
            vec![-PI, 0.0, PI],
        ),
    ];
    for (family, fixed_expect, unstable_expect) in expect {
        match classify_flow_points(family, 4096) {
            Err(e) => c.require(false, format!("{family:?}: {e}")),
            Ok(fp) => {
                c.require(
                    fp.fixed.len() == fixed_expect.len(),
                    format!("{family:?}: fixed {:?}", fp.fixed),
                );
                for (got, want) in fp.fixed.iter().zip(&fixed_expect) {
                    c.require(
                        (got - want).abs() < 1e-6,
                        format!("{family:?}: fixed point {got} vs {want}"),
                    );
                }
                c.require(
                    fp.unstable.len() == unstable_expect.len(),
                    format!("{family:?}: unstable {:?}", fp.unstable),
                );
                for (got, want) in fp.unstable.iter().zip(&unstable_expect) {
                    c.require(
                        (got - want).abs() < 1e-6,
                        format!("{family:?}: pole {got} vs {want}"),
                    );
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 10.0, format!("runtime {elapsed:.1}s exceeds 10s"));
    c.finish("C6", "flow agreement, fixed points and poles", started)
}

/// Criterion 7: Wannier decay-length orderings near quadratic vs linear
/// points, and the numeric zone transform matches the two-peak closed form
/// within 10% for even R in [ξ/2, 3ξ].
pub fn criterion_wannier() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let red2 = line_by_name("red2").unwrap();
    let blue1 = line_by_name("blue1").unwrap();
    // quadratic points: slower decay (larger ξ) closer to the transition
    for (line, mc) in [(&red2, 2.0 * PI / 3.0), (&blue1, PI / 3.0)] {
        let near = wannier_correlation(line, mc - 0.1, 0.0, 0).unwrap();
        let far = wannier_correlation(line, mc - 0.3, 0.0, 0).unwrap();
        c.require(
            near.xi_c > far.xi_c,
            format!("{}@{mc:.3}: xi(0.1) = {:.3} <= xi(0.3) = {:.3}", line.name, near.xi_c, far.xi_c),
        );
        c.note(format!(
            "{}@{mc:.3}: xi(0.1)={:.2}, xi(0.3)={:.2}",
            line.name, near.xi_c, far.xi_c
        ));
    }
    // linear points on red/blue lines: the ordering reverses
    let near = wannier_correlation(&red2, -0.1, 0.0, 0).unwrap();
    let far = wannier_correlation(&red2, -0.3, 0.0, 0).unwrap();
    c.require(
        near.xi_c < far.xi_c,
        format!("red2@0: xi(0.1) = {:.3} >= xi(0.3) = {:.3}", near.xi_c, far.xi_c),
    );
    // numeric transform vs two-peak closed form
    let theta1 = 2.0 * PI / 3.0 - 0.02;
    let series = wannier_correlation(&red2, theta1, 0.0, 0).unwrap();
    let (fp, xi) = (series.f_peak, series.xi_c);
    let mut worst: f64 = 0.0;
    for frac in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let r = (((xi * frac) as u32) / 2) * 2;
        let numeric = wannier_correlation_numeric(&red2, theta1, r, 1 << 15).unwrap();
        let closed = 2.0 * fp / (2.0 * xi) * (-(r as f64) / xi).exp();
        worst = worst.max((numeric.re - closed).abs() / closed.abs());
    }
    c.require(
        worst < 0.10,
        format!("numeric vs closed-form transform: worst rel {worst:.3}"),
    );
    c.note(format!("transform worst rel dev {worst:.3} (xi = {xi:.1})"));
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 30.0, format!("runtime {elapsed:.1}s exceeds 30s"));
    c.finish("C7", "Wannier correlation decay and zone transform", started)
}

/// Criterion 8: velocity spans [-3, 3] (linear, within 1e-3) and
/// [-1.5, 1.5] (quadratic, within 5%); v(k₀) = 0 at quadratic closings;
/// piecewise-constant v at the flow fixed points with deviation < 1e-6.
pub fn criterion_velocity() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let span_of = |angles: CoinAngles| {
        crate::observables::velocity_profile(angles, 20001)
            .map(|p| p.span)
            .unwrap()
    };
    for (t1, t2) in [(0.0, 0.0), (PI, 0.0), (0.0, PI), (0.0, -PI), (-PI, 0.0)] {
        let span = span_of(CoinAngles::new(t1, t2));
        c.require(
            (span.0 + 3.0).abs() < 1e-3 && (span.1 - 3.0).abs() < 1e-3,
            format!("linear point ({t1:.2}, {t2:.2}): span {span:?}"),
        );
    }
    for p in multicritical_points()
        .iter()
        .filter(|p| p.kind == DispersionKind::Quadratic)
    {
        let span = span_of(p.angles);
        c.require(
            (span.0 + 1.5).abs() < 0.075 && (span.1 - 1.5).abs() < 0.075,
            format!("quadratic point ({:?}): span {span:?}", p.angles),
        );
        for closing in &p.gap_closing_momenta {
            let v = group_velocity(p.angles, Momentum::new(closing.k0 + 1e-2), Band::Plus)
                .unwrap_or(0.0);
            c.require(
                v.abs() < 0.1,
                format!("v = {v:.2e} near quadratic closing k0 = {:.3}", closing.k0),
            );
        }
    }
    // piecewise-constant velocity at fixed points on red and blue lines
    let red2 = line_by_name("red2").unwrap();
    let blue1 = line_by_name("blue1").unwrap();
    for (line, fixed) in [
        (&red2, vec![0.0, PI / 2.0, -PI / 2.0, PI, -PI]),
        (&blue1, vec![0.0, PI / 2.0, -PI / 2.0, PI, -PI]),
    ] {
        for t1f in fixed {
            let angles = line.angles_at(t1f);
            // deviation between consecutive closings, margin 0.05
            let closings = crate::phase_topology::gap_closings_at(angles, 1e-6);
            let mut k0s: Vec<f64> = closings.iter().map(|cl| cl.k0).collect();
            k0s.sort_by(|a, b| a.total_cmp(b));
            for w in k0s.windows(2) {
                let (lo, hi) = (w[0] + 0.05, w[1] - 0.05);
                if hi <= lo {
                    continue;
                }
                let mut vmin = f64::MAX;
                let mut vmax = f64::MIN;
                for i in 0..200 {
                    let k = lo + (hi - lo) * i as f64 / 199.0;
                    let v = group_velocity(angles, Momentum::new(k), Band::Plus).unwrap();
                    vmin = vmin.min(v);
                    vmax = vmax.max(v);
                }
                c.require(
                    vmax - vmin < 1e-6,
                    format!(
                        "{}@{t1f:.3}: velocity varies by {:.2e} on ({lo:.2}, {hi:.2})",
                        line.name,
                        vmax - vmin
                    ),
                );
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 30.0, format!("runtime {elapsed:.1}s exceeds 30s"));
    c.finish("C8", "group-velocity spans and fixed-point constancy", started)
}

/// Criterion 9: gapless winding plateaus: red (0, +2, -2, 0) with jumps at
/// {-2π/3, 0, 2π/3}; blue (+2, 0, -2) with jumps at ±π/3 and the ±π branch
/// pair; orange/purple |w_c| = 1; values stable under δ halving.
pub fn criterion_gapless_winding() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let red2 = line_by_name("red2").unwrap();
    let blue1 = line_by_name("blue1").unwrap();
    let blue2 = line_by_name("blue2").unwrap();
    let op1 = line_by_name("op1").unwrap();
    let probe = |line: &CriticalLine, t1: f64| -> i32 {
        critical_winding(line, t1, 1e-2, 1 << 16).unwrap().w_c
    };
    // red plateaus
    let mc = 2.0 * PI / 3.0;
    for (lo, hi, expect) in [
        (-PI + 0.03, -mc - 0.03, 0),
        (-mc + 0.03, -0.03, 2),
        (0.03, mc - 0.03, -2),
        (mc + 0.03, PI - 0.03, 0),
    ] {
        for s in 0..6 {
            let t1 = lo + (hi - lo) * s as f64 / 5.0;
            let got = probe(&red2, t1);
            c.require(got == expect, format!("red2@{t1:.3}: w_c = {got}, expected {expect}"));
        }
    }
    // jump locations on a 600-step sweep
    let n_sweep = 600;
    let mut jumps = Vec::new();
    let mut prev: Option<i32> = None;
    for i in 0..=n_sweep {
        let t1 = -PI + 0.02 + (2.0 * PI - 0.04) * i as f64 / n_sweep as f64;
        if [mc, -mc, 0.0].iter().any(|x| (t1 - x).abs() < 0.02) {
            continue;
        }
        let w = probe(&red2, t1);
        if let Some(p) = prev {
            if p != w {
                jumps.push(t1);
            }
        }
        prev = Some(w);
    }
    // (the skipped windows keep the pre-window value in `prev`, so each
    // transition registers at the first probe past its window)
    c.require(
        jumps.len() == 3,
        format!("red sweep: {} jumps at {jumps:?}", jumps.len()),
    );
    for (jump, expect) in jumps.iter().zip([-mc, 0.0, mc]) {
        c.require(
            (jump - expect).abs() < 0.05,
            format!("red jump at {jump:.3}, expected {expect:.3}"),
        );
    }
    // blue plateaus and the ±π branch pair
    for (t1, expect) in [(-2.0, 2), (-2.8, 2), (0.0, 0), (0.8, 0), (2.0, -2), (2.8, -2)] {
        let got = probe(&blue1, t1);
        c.require(got == expect, format!("blue1@{t1:.3}: w_c = {got}, expected {expect}"));
    }
    let b1_end = probe(&blue1, PI - 0.02);
    let b2_end = probe(&blue2, -PI + 0.02);
    c.require(
        b1_end == -2 && b2_end == 2,
        format!("blue ±π branch pair: {b1_end} / {b2_end}"),
    );
    // orange/purple: |w_c| = 1 on the gapless domains, sign flip across 0
    for (t1, expect) in [(-1.0, 1), (-0.5, 1), (0.5, -1), (1.0, -1), (-3.0, 1), (3.0, -1)] {
        let got = probe(&op1, t1);
        c.require(got == expect, format!("op1@{t1:.3}: w_c = {got}, expected {expect}"));
    }
    // δ-halving stability at representative probes
    for (line, t1) in [(&red2, 1.0), (&red2, -2.9), (&blue1, -2.0), (&op1, 0.5)] {
        let a = critical_winding(line, t1, 1e-2, 1 << 16).unwrap();
        let b = critical_winding(line, t1, 5e-3, 1 << 16).unwrap();
        c.require(
            (a.w_c_raw - b.w_c_raw).abs() < 1e-2,
            format!("{}@{t1:.2}: drift {:.3e}", line.name, (a.w_c_raw - b.w_c_raw).abs()),
        );
        c.require(a.w_c == b.w_c, format!("{}@{t1:.2}: rounded value changed", line.name));
    }
    let elapsed = started.elapsed().as_secs_f64();
    c.require(elapsed < 60.0, format!("runtime {elapsed:.1}s exceeds 60s"));
    c.finish("C9", "gapless winding plateaus and transitions", started)
}

/// Criterion 10: always-on property suites (unitarity, chiral defect,
/// α ≡ d₀, matrix-vs-formula decomposition, closed-vs-direct curvature,
/// velocity band antisymmetry).
pub fn criterion_property_suite() -> CriterionOutcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9d2c_5680);
    let mut worst_unitarity: f64 = 0.0;
    let mut worst_alpha: f64 = 0.0;
    let mut worst_matrix: f64 = 0.0;
    for _ in 0..10_000 {
        let angles = CoinAngles::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let k = Momentum::new(rng.gen_range(-PI..PI));
        let b = bloch_vector(angles, k);
        worst_unitarity = worst_unitarity.max(b.norm_defect());
        worst_alpha = worst_alpha.max((alpha(angles, k) - b.d0).abs());
        let (bm, residual) = walk_unitary(angles, k).pauli_decomposition();
        worst_matrix = worst_matrix
            .max(residual)
            .max((bm.d0 - b.d0).abs())
            .max((bm.d2 - b.d2).abs())
            .max((bm.d3 - b.d3).abs());
    }
    c.require(worst_unitarity < 1e-12, format!("unitarity {worst_unitarity:e}"));
    c.require(worst_alpha < 1e-12, format!("alpha identity {worst_alpha:e}"));
    c.require(worst_matrix < 1e-12, format!("matrix decomposition {worst_matrix:e}"));
    let mut worst_chiral: f64 = 0.0;
    let mut tested = 0;
    while tested < 1000 {
        let angles = CoinAngles::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let k = Momentum::new(rng.gen_range(-PI..PI));
        if gap_at(angles, k) < 1e-6 {
            continue;
        }
        match chiral_check(angles, k) {
            Ok(d) => {
                worst_chiral = worst_chiral.max(d);
                tested += 1;
            }
            Err(_) => continue,
        }
    }
    c.require(worst_chiral < 1e-10, format!("chiral defect {worst_chiral:e}"));
    // closed-form vs direct curvature on well-conditioned samples
    let lines = critical_lines();
    let mut worst_curv: f64 = 0.0;
    let mut tested = 0;
    while tested < 1000 {
        let line = &lines[rng.gen_range(0..lines.len())];
        let t1 = rng.gen_range(line.theta1_domain.0..line.theta1_domain.1);
        let k = rng.gen_range(-PI..PI);
        let cb = critical_bloch(line, t1, k).unwrap();
        if cb.d2c * cb.d2c + cb.d3c * cb.d3c < 1e-3 {
            continue;
        }
        let direct = curvature_function(line, t1, k).unwrap();
        let closed = closed_form_curvature(line.family, t1, k).unwrap();
        worst_curv = worst_curv.max((direct - closed).abs());
        tested += 1;
    }
    c.require(worst_curv < 1e-9, format!("curvature closed-vs-direct {worst_curv:e}"));
    // velocity band antisymmetry
    let mut worst_v: f64 = 0.0;
    let mut tested = 0;
    while tested < 1000 {
        let angles = CoinAngles::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let k = Momentum::new(rng.gen_range(-PI..PI));
        let vp = group_velocity(angles, k, Band::Plus);
        let vm = group_velocity(angles, k, Band::Minus);
        if let (Ok(vp), Ok(vm)) = (vp, vm) {
            worst_v = worst_v.max((vp + vm).abs());
            tested += 1;
        }
    }
    c.require(worst_v < 1e-12, format!("velocity antisymmetry {worst_v:e}"));
    c.note(format!(
        "unitarity {worst_unitarity:.1e}, chiral {worst_chiral:.1e}, curvature {worst_curv:.1e}"
    ));
    c.finish("C10", "always-on property suites", started)
}

/// (id, name, runner) entry of the criteria table.
pub type CriterionEntry = (&'static str, &'static str, fn() -> CriterionOutcome);

/// All criteria in order.
pub fn criteria() -> Vec<CriterionEntry> {
    vec![
        ("C1", "phase diagram quantization and gapless geometry", criterion_phase_diagram),
        ("C2", "multicritical catalog and dynamical exponents", criterion_multicritical_catalog),
        ("C3", "critical exponents gamma = nu = 1", criterion_exponents),
        ("C4", "peak sign flip and tenfold divergence", criterion_sign_flip_divergence),
        ("C5", "peak swapping at linear multicritical points", criterion_swapping),
        ("C6", "flow agreement, fixed points and poles", criterion_rg_flow),
        ("C7", "Wannier correlation decay and zone transform", criterion_wannier),
        ("C8", "group-velocity spans and fixed-point constancy", criterion_velocity),
        ("C9", "gapless winding plateaus and transitions", criterion_gapless_winding),
        ("C10", "always-on property suites", criterion_property_suite),
    ]
}

/// Run every criterion whose id or name contains `filter` (all when None).
pub fn run_criteria(filter: Option<&str>) -> Vec<CriterionOutcome> {
    criteria()
        .into_iter()
        .filter(|(id, name, _)| {
            filter
                .map(|f| id.contains(f) || name.contains(f))
                .unwrap_or(true)
        })
        .map(|(_, _, run)| run())
        .collect()
}
