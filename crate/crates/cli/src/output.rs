//! Rendering of command results as CSV, JSON or an aligned text table.

use std::fmt::Display;
use std::io::Write;

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

/// What every command produces: one table, a few summary lines, the full
/// JSON document, and whether an invariant check failed.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
    pub json: Value,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Report { headers: headers.into_iter().map(Into::into).collect(), json: json!({}), ..Default::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: &str, value: impl Display) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.failures.push(message.into());
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let mut doc = self.json.clone();
                if let Value::Object(map) = &mut doc {
                    map.insert("ok".into(), json!(self.ok()));
                    if !self.failures.is_empty() {
                        map.insert("failures".into(), json!(self.failures));
                    }
                }
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
            Format::Table => {
                write!(out, "{}", render_table(&self.headers, &self.rows))?;
                if !self.summary.is_empty() {
                    writeln!(out)?;
                    let width = self.summary.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                    for (k, v) in &self.summary {
                        writeln!(out, "{k:<width$}  {v}")?;
                    }
                }
                for f in &self.failures {
                    writeln!(out, "FAILED: {f}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(headers);
    s += &(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  ") + "\n");
    for r in rows {
        s += &line(r);
    }
    s
}

/// Floats are printed with enough digits to round-trip.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

/// Fixed-precision rendering for tables meant to be read; values that
/// round to zero print as `0.000000000`, never with a minus sign.
pub fn fixed(x: f64) -> String {
    if x.abs() < 5e-10 {
        return format!("{:.9}", 0.0);
    }
    format!("{x:.9}")
}

/// Grid coordinates such as temperatures: at most ten decimals, trailing
/// zeros dropped.
pub fn coordinate(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}
