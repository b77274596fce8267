use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::Format;

pub type Row = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Output of one command. Exact integers and rationals are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

/// Per-row verdict tally.
#[derive(Debug, Default)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl Tally {
    pub fn record(&mut self, verdict: &str) {
        match verdict {
            "PASS" => self.passed += 1,
            "FAIL" => self.failed += 1,
            _ => self.skipped += 1,
        }
    }

    pub fn into_summary(self) -> Summary {
        Summary {
            status: if self.failed == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            passed: self.passed,
            failed: self.failed,
            skipped: self.skipped,
            notes: self.notes,
        }
    }
}

/// Builds a row from `(column, value)` pairs, keeping their order.
pub fn row<const N: usize>(cells: [(&str, Value); N]) -> Row {
    cells.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn text(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn residual(v: f64) -> Value {
    Value::String(format!("{v:.3e}"))
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

impl Report {
    /// Column names in first-seen order across all rows.
    pub fn columns(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for row in &self.rows {
            for key in row.keys() {
                if !out.contains(key) {
                    out.push(key.clone());
                }
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let columns = self.columns();
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(columns.iter().map(|c| cell(row.get(c))))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8 cells")
    }

    fn render_text(&self) -> String {
        let columns = self.columns();
        let table: Vec<Vec<String>> = std::iter::once(columns.clone())
            .chain(
                self.rows
                    .iter()
                    .map(|r| columns.iter().map(|c| cell(r.get(c))).collect()),
            )
            .collect();
        let widths: Vec<usize> = (0..columns.len())
            .map(|j| {
                table
                    .iter()
                    .map(|r| r[j].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for r in &table {
            let mut line = String::new();
            for (j, value) in r.iter().enumerate() {
                if j > 0 {
                    line.push_str("  ");
                }
                line.push_str(value);
                line.extend(std::iter::repeat_n(' ', widths[j] - value.chars().count()));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{}: {} passed, {} failed, {} skipped\n",
            match s.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            },
            s.passed,
            s.failed,
            s.skipped
        ));
        for note in &s.notes {
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}
