//! Fixed-schema trial tables and their CSV/JSON renderings.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Int(u64),
    Float(f64),
    Flag(bool),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_flag(&self) -> Option<bool> {
        match self {
            Cell::Flag(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    /// 17 significant digits so dominance checks can be redone from the file.
    fn csv_field(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<Option<bool>> for Cell {
    fn from(v: Option<bool>) -> Self {
        v.map_or(Cell::Empty, Cell::Flag)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Result of one command: records in seed order plus a summary.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub summary: Map<String, Value>,
    /// Failed assertions and errored trials; nonzero means exit code 2.
    pub failures: usize,
    /// Per-record wall time, kept out of the data output.
    pub wall_seconds: Vec<f64>,
}

impl Report {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Cells of one column; panics on an unknown name.
    pub fn column(&self, name: &str) -> Vec<&Cell> {
        let i = self
            .column_index(name)
            .unwrap_or_else(|| panic!("{} has no column {name}", self.command));
        self.rows.iter().map(|r| &r[i]).collect()
    }

    pub fn floats(&self, name: &str) -> Vec<Option<f64>> {
        self.column(name).into_iter().map(Cell::as_f64).collect()
    }

    pub fn flags(&self, name: &str) -> Vec<Option<bool>> {
        self.column(name).into_iter().map(Cell::as_flag).collect()
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.into_inner().map_err(|e| CliError::Io {
            path: PathBuf::from("<csv buffer>"),
            source: e.into_error(),
        })
    }

    fn render_json(&self) -> Result<Vec<u8>> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command));
        doc.insert("columns".into(), Value::from(self.columns.to_vec()));
        doc.insert("records".into(), Value::Array(records));
        doc.insert("summary".into(), Value::Object(self.summary.clone()));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn summary_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.summary)?;
        s.push('\n');
        Ok(s)
    }

    pub fn meta_json(&self) -> Result<String> {
        let total: f64 = self.wall_seconds.iter().sum();
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command));
        m.insert("trial_wall_seconds".into(), Value::from(self.wall_seconds.clone()));
        m.insert("total_wall_seconds".into(), Value::from(total));
        let mut s = serde_json::to_string_pretty(&m)?;
        s.push('\n');
        Ok(s)
    }
}

/// `<out>.summary.json` and `<out>.meta.json` next to the data file.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes data, summary and metadata. Without `out` the data goes to
/// `stdout` and the summary to `stderr`.
pub fn emit(
    report: &Report,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let data = report.render(format)?;
    let summary = report.summary_json()?;
    let console = |e: std::io::Error| CliError::Io {
        path: PathBuf::from("<console>"),
        source: e,
    };
    match out {
        Some(path) => {
            write_file(path, &data)?;
            write_file(&sidecar(path, ".summary.json"), summary.as_bytes())?;
            write_file(&sidecar(path, ".meta.json"), report.meta_json()?.as_bytes())?;
            stdout.write_all(summary.as_bytes()).map_err(console)?;
        }
        None => {
            stdout.write_all(&data).map_err(console)?;
            stderr.write_all(summary.as_bytes()).map_err(console)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            command: "demo",
            columns: &["seed", "value", "ok", "status"],
            rows: vec![
                vec![Cell::Int(0), Cell::Float(0.1), Cell::Flag(true), "ok".into()],
                vec![Cell::Int(1), Cell::Empty, Cell::Empty, "error: x, y".into()],
            ],
            summary: Map::new(),
            failures: 1,
            wall_seconds: vec![0.5, 0.25],
        }
    }

    #[test]
    fn csv_uses_seventeen_digits_and_quotes() {
        let text = String::from_utf8(sample().render(Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "seed,value,ok,status");
        assert_eq!(lines[1], "0,1.0000000000000001e-1,true,ok");
        assert_eq!(lines[2], "1,,,\"error: x, y\"");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_keeps_column_order_and_nulls() {
        let v: Value = serde_json::from_slice(&sample().render(Format::Json).unwrap()).unwrap();
        let rec = v["records"][1].as_object().unwrap();
        let keys: Vec<&String> = rec.keys().collect();
        assert_eq!(keys, ["seed", "value", "ok", "status"]);
        assert!(rec["value"].is_null());
        assert_eq!(v["records"][0]["value"], 0.1);
    }

    #[test]
    fn wall_times_stay_out_of_data() {
        let r = sample();
        let data = String::from_utf8(r.render(Format::Json).unwrap()).unwrap();
        assert!(!data.contains("wall"));
        assert!(r.meta_json().unwrap().contains("total_wall_seconds"));
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(sidecar(Path::new("/tmp/run.csv"), ".meta.json"), PathBuf::from("/tmp/run.csv.meta.json"));
    }
}
