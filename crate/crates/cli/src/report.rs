//! Experiment reports: a flat, deterministic record of one experiment run.
//!
//! Every run produces an [`ExperimentReport`] holding the resolved
//! configuration, named scalar statistics, named pass/fail checks (each
//! check's threshold is recorded as a scalar next to the statistic it
//! gates), named series, free-form notes, and an exclusion tally.
//!
//! # Determinism
//!
//! Reports are byte-identical across runs and across worker counts for a
//! fixed configuration, with one documented exception: `wall_time_s`, the
//! only nondeterministic field. Comparisons of report bytes must mask it;
//! [`deterministic_view`] does exactly that for JSON output, and the CSV
//! writer keys the corresponding row as `meta,wall_time_s` so line filters
//! can drop it.
//!
//! All maps are ordered (`BTreeMap`), so key order never depends on
//! insertion order, and JSON floats use shortest round-trip formatting.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Outcome record for a single experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    /// Experiment name; also the subcommand that produced it.
    pub name: String,
    /// Crate version that produced the report.
    pub version: String,
    /// Fully resolved configuration (defaults applied), including the seed.
    pub config: BTreeMap<String, Value>,
    /// Named scalar statistics, including every gate threshold.
    pub scalars: BTreeMap<String, f64>,
    /// Named pass/fail checks; `pass` is their conjunction.
    pub checks: BTreeMap<String, bool>,
    /// Named numeric series (profiles, grids, per-replicate statistics).
    pub series: BTreeMap<String, Vec<f64>>,
    /// Human-readable caveats and context, in a fixed order.
    pub notes: Vec<String>,
    /// Count of samples or paths excluded by the range policy.
    pub exclusions: u64,
    /// Conjunction of all entries in `checks`.
    pub pass: bool,
    /// Wall-clock duration of the run in seconds. The only field that
    /// varies between identically configured runs.
    pub wall_time_s: f64,
}

impl ExperimentReport {
    /// Starts an empty report for the named experiment.
    pub fn new(name: &str, config: BTreeMap<String, Value>) -> Self {
        ExperimentReport {
            name: name.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            scalars: BTreeMap::new(),
            checks: BTreeMap::new(),
            series: BTreeMap::new(),
            notes: Vec::new(),
            exclusions: 0,
            pass: true,
            wall_time_s: 0.0,
        }
    }

    /// Records a scalar statistic.
    pub fn scalar(&mut self, key: &str, value: f64) {
        self.scalars.insert(key.to_string(), value);
    }

    /// Records a gated check and folds it into the overall verdict.
    pub fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_string(), ok);
        self.pass &= ok;
    }

    /// Records a named series.
    pub fn series(&mut self, key: &str, values: Vec<f64>) {
        self.series.insert(key.to_string(), values);
    }

    /// Appends a note.
    pub fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Long-form CSV: one row per datum, with a header naming every column.
    ///
    /// `section` is one of `meta`, `config`, `scalar`, `check`, `series`,
    /// or `note`; `index` is the position within a series (or within the
    /// note list) and empty elsewhere. Values render as JSON scalars, so
    /// numbers survive a round trip exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,key,index,value\n");
        let mut row = |section: &str, key: &str, index: Option<usize>, value: String| {
            let idx = index.map(|i| i.to_string()).unwrap_or_default();
            out.push_str(&format!("{section},{key},{idx},{value}\n"));
        };
        row("meta", "name", None, csv_quote(&self.name));
        row("meta", "version", None, csv_quote(&self.version));
        row("meta", "pass", None, self.pass.to_string());
        row("meta", "exclusions", None, self.exclusions.to_string());
        row("meta", "wall_time_s", None, fmt_f64(self.wall_time_s));
        for (k, v) in &self.config {
            match v {
                Value::Array(items) => {
                    for (i, item) in items.iter().enumerate() {
                        row("config", k, Some(i), item.to_string());
                    }
                }
                other => row("config", k, None, other.to_string()),
            }
        }
        for (k, v) in &self.scalars {
            row("scalar", k, None, fmt_f64(*v));
        }
        for (k, v) in &self.checks {
            row("check", k, None, v.to_string());
        }
        for (k, vs) in &self.series {
            for (i, v) in vs.iter().enumerate() {
                row("series", k, Some(i), fmt_f64(*v));
            }
        }
        for (i, n) in self.notes.iter().enumerate() {
            row("note", "note", Some(i), csv_quote(n));
        }
        out
    }
}

/// Shortest round-trip float formatting, shared by JSON and CSV so the two
/// formats never disagree on a value's digits.
fn fmt_f64(v: f64) -> String {
    serde_json::to_string(&v).expect("float serializes")
}

/// Minimal CSV quoting: wrap in double quotes, double any embedded quote.
fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Parses a JSON report (single object or array of objects) and blanks
/// every `wall_time_s` field, returning the re-serialized bytes used for
/// byte-identity comparisons.
pub fn deterministic_view(json_text: &str) -> Result<String, serde_json::Error> {
    let mut value: Value = serde_json::from_str(json_text)?;
    fn mask(v: &mut Value) {
        match v {
            Value::Array(items) => items.iter_mut().for_each(mask),
            Value::Object(map) => {
                if let Some(slot) = map.get_mut("wall_time_s") {
                    *slot = Value::from(0.0);
                }
            }
            _ => {}
        }
    }
    mask(&mut value);
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

/// Output format for rendered reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Renders a batch of reports and writes them to `out` (or stdout).
///
/// JSON: a single report renders as one object, several as an array, to a
/// single destination. CSV: one file per experiment; with an output path
/// the experiment name is inserted before the extension
/// (`report.csv` -> `report.dist-check.csv`) whenever there is more than
/// one report, and on stdout the files are concatenated with a
/// `# <name>` separator line before each.
pub fn write_reports(
    reports: &[ExperimentReport],
    format: Format,
    out: Option<&Path>,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let text = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                let values: Vec<&ExperimentReport> = reports.iter().collect();
                let mut s =
                    serde_json::to_string_pretty(&values).expect("reports serialize");
                s.push('\n');
                s
            };
            match out {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            }
        }
        Format::Csv => match out {
            Some(path) => {
                for report in reports {
                    let target = if reports.len() == 1 {
                        path.to_path_buf()
                    } else {
                        per_experiment_path(path, &report.name)
                    };
                    std::fs::write(target, report.to_csv())?;
                }
                Ok(())
            }
            None => {
                let mut stdout = std::io::stdout();
                for report in reports {
                    writeln!(stdout, "# {}", report.name)?;
                    stdout.write_all(report.to_csv().as_bytes())?;
                }
                Ok(())
            }
        },
    }
}

/// `report.csv` + `dist-check` -> `report.dist-check.csv`.
fn per_experiment_path(base: &Path, name: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}.{name}.{ext}"))
}

/// Debug helper: dumps one sampled path as `t,w` CSV rows.
pub fn write_path_csv(path: &itocheck_core::paths::SamplePath, dest: &Path) -> std::io::Result<()> {
    let mut out = String::from("t,w\n");
    for (t, w) in path.grid().times().iter().zip(path.values()) {
        out.push_str(&format!("{},{}\n", fmt_f64(*t), fmt_f64(*w)));
    }
    std::fs::write(dest, out)
}
