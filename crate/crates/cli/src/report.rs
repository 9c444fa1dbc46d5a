//! Reports and their JSON, CSV and text renderings.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Field order is fixed; nested maps are key-sorted, so equal inputs give
/// byte-identical JSON apart from `elapsed_ms`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub params: Value,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub results: Value,
    pub table: Table,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(experiment: &str, params: Value, checks: Vec<Check>, results: Value, table: Table) -> Self {
        Report {
            experiment: experiment.into(),
            params,
            pass: checks.iter().all(|c| c.pass),
            checks,
            results,
            table,
            elapsed_ms: 0,
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        Ok(match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.csv()?,
            OutputFormat::Text => self.text(),
        })
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.columns)?;
        for row in &self.table.rows {
            w.write_record(row.iter().map(cell))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", self.experiment);
        flatten("params", &self.params, &mut s);
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        flatten("results", &self.results, &mut s);
        if !self.table.rows.is_empty() {
            let widths: Vec<usize> = (0..self.table.columns.len())
                .map(|j| {
                    self.table
                        .rows
                        .iter()
                        .map(|r| cell(&r[j]).chars().count())
                        .chain([self.table.columns[j].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<String>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(s, "{}", line(self.table.columns.clone()));
            for r in &self.table.rows {
                let _ = writeln!(s, "{}", line(r.iter().map(cell).collect()));
            }
        }
        let _ = writeln!(s, "verdict: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `path = value` lines; arrays of scalars stay on one line.
fn flatten(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{path}.{k}"), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        other => {
            let _ = writeln!(out, "{path} = {}", cell(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut t = Table::new(&["g", "num", "den"]);
        t.push(vec![json!("(1)"), json!(2), json!(25)]);
        Report::new(
            "density-scan",
            json!({"a": 1, "b": 2}),
            vec![Check::new("x", true, "ok")],
            json!({"mu": "2/5", "set": [0, 1], "nested": [{"k": 1}]}),
            t,
        )
    }

    #[test]
    fn csv_header_and_rows() {
        assert_eq!(sample().render(OutputFormat::Csv).unwrap(), "g,num,den\n(1),2,25\n");
    }

    #[test]
    fn text_carries_every_number() {
        let r = sample();
        let text = r.render(OutputFormat::Text).unwrap();
        for needle in ["params.a = 1", "results.mu = 2/5", "results.set = [0,1]", "results.nested[0].k = 1", "(1)    2   25", "verdict: PASS"] {
            assert!(text.contains(needle), "{needle} missing from\n{text}");
        }
    }

    #[test]
    fn json_is_stable() {
        let a = sample().render(OutputFormat::Json).unwrap();
        let b = sample().render(OutputFormat::Json).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["table"]["columns"], json!(["g", "num", "den"]));
    }
}
