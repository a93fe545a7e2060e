//! Experiment outputs: one row per trial, per-`n` aggregates and derived
//! estimates, written as CSV with a JSON sidecar.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::stats::Summary;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Bool(b) => Some(b as u8 as f64),
            Cell::Int(i) => Some(i as f64),
            Cell::Float(x) => Some(x),
            _ => None,
        }
    }

    /// CSV text; floats carry 17 significant digits.
    pub fn to_field(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Float(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    /// Inverse of [`Cell::to_field`] for numeric and boolean fields.
    pub fn parse_numeric(field: &str) -> Option<f64> {
        match field {
            "true" => Some(1.0),
            "false" => Some(0.0),
            "" => None,
            _ => field.parse().ok(),
        }
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n: usize,
    pub metric: String,
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Columns summarized per value of the `n` column.
    pub metrics: Vec<String>,
    pub aggregates: Vec<Aggregate>,
    /// Named estimates, keyed `name` or `name@n`.
    pub derived: BTreeMap<String, f64>,
}

impl ExperimentRecord {
    pub fn new(config: &ExperimentConfig, columns: &[&str], metrics: &[&str]) -> Self {
        ExperimentRecord {
            experiment: config.experiment.clone(),
            config: config.clone(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metrics: metrics.iter().map(|c| c.to_string()).collect(),
            aggregates: Vec::new(),
            derived: BTreeMap::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, restricted to rows with the given `n`.
    pub fn values(&self, name: &str, n: Option<usize>) -> Vec<f64> {
        let c = self.column(name).expect("known column");
        let nc = self.column("n");
        self.rows
            .iter()
            .filter(|r| match (n, nc) {
                (Some(n), Some(nc)) => r[nc].as_f64() == Some(n as f64),
                _ => true,
            })
            .filter_map(|r| r[c].as_f64())
            .collect()
    }

    pub fn set(&mut self, name: &str, n: Option<usize>, value: f64) {
        self.derived.insert(key(name, n), value);
    }

    pub fn get(&self, name: &str, n: Option<usize>) -> Option<f64> {
        self.derived.get(&key(name, n)).copied()
    }

    /// Fills `aggregates` from the rows.
    pub fn finish(&mut self) {
        self.aggregates = aggregate(&self.columns, self.rows.iter().map(|r| r.iter().map(Cell::as_f64).collect()), &self.metrics);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_field)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Sidecar contents: config, aggregates and derived values.
    pub fn sidecar_json(&self) -> String {
        let v = serde_json::json!({
            "experiment": self.experiment,
            "config": self.config,
            "columns": self.columns,
            "rows": self.rows.len(),
            "aggregates": self.aggregates,
            "derived": self.derived,
        });
        serde_json::to_string_pretty(&v).expect("records serialize")
    }

    /// Writes `path` and `path.json`; returns the sidecar path.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        let io = |p: &Path, e: std::io::Error| LabError::Io { path: p.display().to_string(), message: e.to_string() };
        std::fs::write(path, self.to_csv()).map_err(|e| io(path, e))?;
        let mut side = path.as_os_str().to_owned();
        side.push(".json");
        let side = PathBuf::from(side);
        std::fs::write(&side, self.sidecar_json()).map_err(|e| io(&side, e))?;
        Ok(side)
    }
}

fn key(name: &str, n: Option<usize>) -> String {
    match n {
        Some(n) => format!("{name}@{n}"),
        None => name.to_string(),
    }
}

/// Per-`n` summaries of `metrics` over numeric rows. Rows lacking a value
/// for a metric are skipped for that metric.
pub fn aggregate(columns: &[String], rows: impl Iterator<Item = Vec<Option<f64>>>, metrics: &[String]) -> Vec<Aggregate> {
    let Some(nc) = columns.iter().position(|c| c == "n") else {
        return Vec::new();
    };
    let idx: Vec<usize> = metrics.iter().map(|m| columns.iter().position(|c| c == m).expect("metric column")).collect();
    let mut groups: BTreeMap<usize, Vec<Vec<f64>>> = BTreeMap::new();
    for row in rows {
        let Some(n) = row[nc] else { continue };
        let slot = groups.entry(n as usize).or_insert_with(|| vec![Vec::new(); idx.len()]);
        for (j, &c) in idx.iter().enumerate() {
            if let Some(v) = row[c] {
                slot[j].push(v);
            }
        }
    }
    let mut out = Vec::new();
    for (n, values) in groups {
        for (m, v) in metrics.iter().zip(values) {
            if let Some(summary) = Summary::of(&v) {
                out.push(Aggregate { n, metric: m.clone(), summary });
            }
        }
    }
    out
}

/// Recomputes the aggregates of a CSV written by [`ExperimentRecord::to_csv`].
pub fn aggregate_csv(text: &str, metrics: &[String]) -> Result<Vec<Aggregate>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let bad = |e: csv::Error| LabError::Io { path: "<csv>".into(), message: e.to_string() };
    let columns: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(bad)?.iter().map(Cell::parse_numeric).collect());
    }
    Ok(aggregate(&columns, rows.into_iter(), metrics))
}
