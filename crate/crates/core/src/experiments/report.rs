use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::error::Result;

use super::config::{ExperimentConfig, ExperimentId};

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Twelve significant digits.
    Num(f64),
    Int(i64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // −0 prints as 0
            Cell::Num(v) => format!("{:.11e}", v + 0.0),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(v) => v.to_string(),
            Cell::Text(s) => s.replace([',', '\n', '\r'], ";"),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(v.to_string()),
            Cell::Int(v) => json!(v),
            Cell::Flag(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// One case of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: ExperimentId,
    pub config_hash: String,
    /// Parameter tuple, e.g. `i=6`.
    pub case: String,
    /// Aligned with [`ExperimentReport::columns`].
    pub values: Vec<Cell>,
    pub pass: bool,
    /// Kept out of the CSV so that it stays byte-stable.
    pub wall_seconds: f64,
}

impl ResultRow {
    /// Value of `column`, given the report's column list.
    pub fn get(&self, columns: &[&str], column: &str) -> Option<&Cell> {
        columns.iter().position(|c| *c == column).map(|k| &self.values[k])
    }
}

/// Rows and cross-row checks of one run.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub columns: Vec<&'static str>,
    pub rows: Vec<ResultRow>,
    /// Checks spanning several rows, e.g. monotonicity.
    pub checks: Vec<(String, bool)>,
    /// Extra summary entries.
    pub summary: Map<String, Value>,
    pub wall_seconds: f64,
}

impl ExperimentReport {
    /// Every row and every check passed.
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.checks.iter().all(|c| c.1)
    }

    /// Numeric value of `column` in the row for `case`.
    pub fn number(&self, case: &str, column: &str) -> Option<f64> {
        let row = self.rows.iter().find(|r| r.case == case)?;
        match row.get(&self.columns, column)? {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    /// `experiment,config_hash,case,<columns>,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,config_hash,case");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push_str(",pass\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}", row.experiment, row.config_hash, row.case));
            for v in &row.values {
                out.push(',');
                out.push_str(&v.render());
            }
            out.push_str(&format!(",{}\n", row.pass));
        }
        out
    }

    pub fn summary_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("case".into(), json!(r.case));
                for (c, v) in self.columns.iter().zip(&r.values) {
                    m.insert((*c).into(), v.to_json());
                }
                m.insert("pass".into(), json!(r.pass));
                m.insert("wall_seconds".into(), json!(r.wall_seconds));
                Value::Object(m)
            })
            .collect();
        let checks: Map<String, Value> = self.checks.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let mut out = Map::new();
        out.insert("experiment".into(), json!(self.config.experiment));
        out.insert("config_hash".into(), json!(self.config.hash()));
        out.insert("config".into(), serde_json::to_value(&self.config).expect("config serialises"));
        out.insert("pass".into(), json!(self.pass()));
        out.insert("checks".into(), Value::Object(checks));
        out.insert("rows".into(), Value::Array(rows));
        out.insert("wall_seconds".into(), json!(self.wall_seconds));
        for (k, v) in &self.summary {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    /// Writes `<out>/<experiment>.csv` and `<out>/<experiment>.summary.json`.
    pub fn write(&self) -> Result<(PathBuf, PathBuf)> {
        let dir = &self.config.out;
        std::fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.config.experiment));
        let summary = dir.join(format!("{}.summary.json", self.config.experiment));
        std::fs::write(&csv, self.to_csv())?;
        std::fs::write(&summary, serde_json::to_string_pretty(&self.summary_json())? + "\n")?;
        Ok((csv, summary))
    }
}
