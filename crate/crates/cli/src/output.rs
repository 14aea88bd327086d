//! Deterministic table output (CSV or JSON) plus the per-run manifest.

use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::config::Format;

/// One table cell; NA marks quantities undefined for the row.
#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    Na,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x}"),
            Cell::I(i) => format!("{i}"),
            Cell::S(s) => s.clone(),
            Cell::Na => "NA".into(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::F(x) => serde_json::json!(x),
            Cell::I(i) => serde_json::json!(i),
            Cell::S(s) => serde_json::json!(s),
            Cell::Na => serde_json::Value::Null,
        }
    }
}

/// Column-labelled numeric table.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Render to bytes in the requested format (always with a header row in
    /// CSV). Rendering is pure, so identical tables give identical bytes.
    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => {
                let mut out = Vec::new();
                writeln!(out, "{}", self.columns.join(",")).unwrap();
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(",")).unwrap();
                }
                out
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| (c.to_string(), cell.json()))
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&rows).unwrap();
                out.push(b'\n');
                out
            }
        }
    }
}

/// Run manifest written next to every data file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub toolkit_version: &'static str,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputRecord>,
    /// Command-specific summary values (span, fixed points, loop count...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub rows: usize,
    pub status: String,
}

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Write the data file and its manifest (`<output>.manifest.json`).
pub fn write_outputs(
    table: &Table,
    format: Format,
    output: &Path,
    command: &str,
    config_echo: BTreeMap<String, String>,
    wall_time_s: f64,
    summary: BTreeMap<String, serde_json::Value>,
) -> std::io::Result<()> {
    if let Some(parent) = output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(output, table.render(format))?;
    let manifest = RunManifest {
        toolkit_version: TOOLKIT_VERSION,
        command: command.to_string(),
        config: config_echo,
        wall_time_s,
        outputs: vec![OutputRecord {
            path: output.display().to_string(),
            rows: table.rows.len(),
            status: "ok".into(),
        }],
        summary,
    };
    let manifest_path = manifest_path_for(output);
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    std::fs::write(manifest_path, bytes)
}

/// Manifest path associated with a data file.
pub fn manifest_path_for(output: &Path) -> std::path::PathBuf {
    let mut os = output.as_os_str().to_owned();
    os.push(".manifest.json");
    std::path::PathBuf::from(os)
}
