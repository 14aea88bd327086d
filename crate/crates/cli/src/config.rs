//! Shared sweep configuration: command-line flags merged over an optional
//! `key=value` config file (flags win).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

/// Output format of the numeric tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Format::Csv => write!(f, "csv"),
            Format::Json => write!(f, "json"),
        }
    }
}

/// Errors that should surface as exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Parse a `key=value` config file (one pair per line, `#` comments).
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| ConfigError(format!("key {key}: cannot parse {value:?}: {e}")))
}

/// One resolved scan configuration; every field carries its final value.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub resolution: usize,
    pub k_grid: usize,
    pub line: String,
    pub theta1_range: Option<(f64, f64)>,
    pub theta1: f64,
    pub theta2: f64,
    pub mc_theta1: f64,
    pub theta1c: Option<f64>,
    pub steps: usize,
    pub delta: f64,
    pub offsets: Vec<f64>,
    pub k0: f64,
    pub r_max: u32,
    pub output: PathBuf,
    pub format: Format,
    pub jobs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            resolution: 201,
            k_grid: 4096,
            line: "red2".into(),
            theta1_range: None,
            theta1: 0.0,
            theta2: 0.0,
            mc_theta1: 2.0 * std::f64::consts::PI / 3.0,
            theta1c: None,
            steps: 600,
            delta: 1e-2,
            offsets: vec![0.1, 0.3],
            k0: 0.0,
            r_max: 60,
            output: PathBuf::from("out.csv"),
            format: Format::Csv,
            jobs: 0,
        }
    }
}

/// Raw optional flags as collected by clap; merged over the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct RawScanArgs {
    /// Grid resolution per axis (phase diagram) or flow grid size.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Momentum points per Brillouin-zone loop.
    #[arg(long = "k-grid")]
    pub k_grid: Option<usize>,
    /// Critical line name: red1,red2,red3,blue1,blue2,op1,op2,op3.
    #[arg(long)]
    pub line: Option<String>,
    /// Restrict a sweep to theta1 in `lo:hi` (radians).
    #[arg(long = "theta1-range")]
    pub theta1_range: Option<String>,
    /// Coin angle theta1 (radians) for point evaluations.
    #[arg(long)]
    pub theta1: Option<f64>,
    /// Coin angle theta2 (radians) for point evaluations.
    #[arg(long)]
    pub theta2: Option<f64>,
    /// Multicritical angle theta1 on the chosen line.
    #[arg(long = "mc-theta1")]
    pub mc_theta1: Option<f64>,
    /// Line parameter theta1 for on-line traces (switches winding-trace to
    /// the critical-line mode).
    #[arg(long)]
    pub theta1c: Option<f64>,
    /// Number of sweep steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Excluded half-width around gap closings (gapless winding).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Comma-separated parameter offsets from the multicritical angle.
    #[arg(long)]
    pub offsets: Option<String>,
    /// Peak momentum used for correlation commands.
    #[arg(long)]
    pub k0: Option<f64>,
    /// Largest Wannier distance R.
    #[arg(long = "r-max")]
    pub r_max: Option<u32>,
    /// Output data file; the run manifest lands next to it.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (0 = rayon default).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Optional key=value config file; explicit flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(f64, f64), ConfigError> {
    let Some((lo, hi)) = s.split_once(':') else {
        return Err(ConfigError(format!("theta1-range: expected lo:hi, got {s:?}")));
    };
    let lo: f64 = parse("theta1-range", lo)?;
    let hi: f64 = parse("theta1-range", hi)?;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(ConfigError(format!("theta1-range: need lo < hi, got {s:?}")));
    }
    Ok((lo, hi))
}

fn parse_offsets(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|tok| parse("offsets", tok.trim()))
        .collect()
}

impl RawScanArgs {
    /// Merge flags over the config file (if any) onto the defaults.
    pub fn resolve(&self) -> Result<ScanConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let known = [
            "resolution", "k-grid", "line", "theta1-range", "theta1", "theta2", "mc-theta1",
            "theta1c", "steps", "delta", "offsets", "k0", "r-max", "output", "format", "jobs",
        ];
        for key in file.keys() {
            if !known.contains(&key.as_str()) {
                return Err(ConfigError(format!("unknown config key {key:?}")));
            }
        }
        let mut cfg = ScanConfig::default();
        let get = |key: &str| file.get(key).map(String::as_str);
        if let Some(v) = get("resolution") {
            cfg.resolution = parse("resolution", v)?;
        }
        if let Some(v) = get("k-grid") {
            cfg.k_grid = parse("k-grid", v)?;
        }
        if let Some(v) = get("line") {
            cfg.line = v.to_string();
        }
        if let Some(v) = get("theta1-range") {
            cfg.theta1_range = Some(parse_range(v)?);
        }
        if let Some(v) = get("theta1") {
            cfg.theta1 = parse("theta1", v)?;
        }
        if let Some(v) = get("theta2") {
            cfg.theta2 = parse("theta2", v)?;
        }
        if let Some(v) = get("mc-theta1") {
            cfg.mc_theta1 = parse("mc-theta1", v)?;
        }
        if let Some(v) = get("theta1c") {
            cfg.theta1c = Some(parse("theta1c", v)?);
        }
        if let Some(v) = get("steps") {
            cfg.steps = parse("steps", v)?;
        }
        if let Some(v) = get("delta") {
            cfg.delta = parse("delta", v)?;
        }
        if let Some(v) = get("offsets") {
            cfg.offsets = parse_offsets(v)?;
        }
        if let Some(v) = get("k0") {
            cfg.k0 = parse("k0", v)?;
        }
        if let Some(v) = get("r-max") {
            cfg.r_max = parse("r-max", v)?;
        }
        if let Some(v) = get("output") {
            cfg.output = PathBuf::from(v);
        }
        if let Some(v) = get("format") {
            cfg.format = match v {
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => return Err(ConfigError(format!("format: {other:?} not csv|json"))),
            };
        }
        if let Some(v) = get("jobs") {
            cfg.jobs = parse("jobs", v)?;
        }
        // explicit flags override the file
        if let Some(v) = self.resolution {
            cfg.resolution = v;
        }
        if let Some(v) = self.k_grid {
            cfg.k_grid = v;
        }
        if let Some(v) = &self.line {
            cfg.line = v.clone();
        }
        if let Some(v) = &self.theta1_range {
            cfg.theta1_range = Some(parse_range(v)?);
        }
        if let Some(v) = self.theta1 {
            cfg.theta1 = v;
        }
        if let Some(v) = self.theta2 {
            cfg.theta2 = v;
        }
        if let Some(v) = self.mc_theta1 {
            cfg.mc_theta1 = v;
        }
        if let Some(v) = self.theta1c {
            cfg.theta1c = Some(v);
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = &self.offsets {
            cfg.offsets = parse_offsets(v)?;
        }
        if let Some(v) = self.k0 {
            cfg.k0 = v;
        }
        if let Some(v) = self.r_max {
            cfg.r_max = v;
        }
        if let Some(v) = &self.output {
            cfg.output = v.clone();
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = self.jobs {
            cfg.jobs = v;
        }
        Ok(cfg)
    }
}

impl ScanConfig {
    /// Echo of the resolved configuration for the run manifest
    /// (deterministically ordered).
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("resolution".into(), self.resolution.to_string());
        m.insert("k-grid".into(), self.k_grid.to_string());
        m.insert("line".into(), self.line.clone());
        if let Some((lo, hi)) = self.theta1_range {
            m.insert("theta1-range".into(), format!("{lo}:{hi}"));
        }
        m.insert("theta1".into(), self.theta1.to_string());
        m.insert("theta2".into(), self.theta2.to_string());
        m.insert("mc-theta1".into(), self.mc_theta1.to_string());
        if let Some(t) = self.theta1c {
            m.insert("theta1c".into(), t.to_string());
        }
        m.insert("steps".into(), self.steps.to_string());
        m.insert("delta".into(), self.delta.to_string());
        m.insert(
            "offsets".into(),
            self.offsets
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("k0".into(), self.k0.to_string());
        m.insert("r-max".into(), self.r_max.to_string());
        m.insert("output".into(), self.output.display().to_string());
        m.insert("format".into(), self.format.to_string());
        m.insert("jobs".into(), self.jobs.to_string());
        m
    }
}
