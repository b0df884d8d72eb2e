//! Report envelopes and output routing.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

/// Everything needed to reproduce a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// The experiment configuration after defaults, config file, environment
    /// and flags have all been applied.
    pub config: Map<String, Value>,
    /// Subcommand parameters that are not part of the configuration.
    pub params: Value,
    pub seed: u64,
    pub tool_version: String,
    pub timestamp_utc: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Map<String, Value>, params: Value, seed: u64) -> Self {
        Self {
            subcommand: subcommand.to_owned(),
            config,
            params,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

/// A curve: a header, numeric rows, and a JSON summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<f64>>,
    pub summary: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Json(Value),
    Csv(Table),
}

pub fn envelope(manifest: &RunManifest, report: Value) -> String {
    let mut text =
        serde_json::to_string_pretty(&json!({ "manifest": manifest, "report": report })).expect("report serializes");
    text.push('\n');
    text
}

fn csv_text(manifest: &RunManifest, table: &Table) -> String {
    let mut text = format!(
        "# manifest {}\n# summary {}\n{}\n",
        serde_json::to_string(manifest).expect("manifest serializes"),
        serde_json::to_string(&table.summary).expect("summary serializes"),
        table.header.join(",")
    );
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

/// Writes the report to `out` if given, otherwise to `stdout`. A curve
/// written to a file is also summarized as JSON on `stdout`.
pub fn emit(manifest: &RunManifest, body: &Body, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match (body, out) {
        (Body::Json(report), None) => stdout.write_all(envelope(manifest, report.clone()).as_bytes()).map_err(io),
        (Body::Json(report), Some(path)) => write_file(path, &envelope(manifest, report.clone())),
        (Body::Csv(table), None) => stdout.write_all(csv_text(manifest, table).as_bytes()).map_err(io),
        (Body::Csv(table), Some(path)) => {
            write_file(path, &csv_text(manifest, table))?;
            let summary = json!({
                "output": path.display().to_string(),
                "rows": table.rows.len(),
                "columns": table.header,
                "summary": table.summary,
            });
            stdout.write_all(envelope(manifest, summary).as_bytes()).map_err(io)
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
