use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use gaussbound::bounds::{format_ratio, format_sig};
use gaussbound::SuiteResult;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// How a float is rounded in pretty output. Machine formats ignore it.
#[derive(Debug, Clone, Copy)]
pub enum Style {
    Sig3,
    Ratio,
    Fixed2,
    Sig10,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64, Style),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn sig(x: f64) -> Self {
        Cell::Float(x, Style::Sig3)
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v, _) if v.is_finite() => json!(v),
            Cell::Float(v, _) => json!(non_finite(*v)),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v, _) if v.is_finite() => format!("{v:.16e}"),
            Cell::Float(v, _) => non_finite(*v).to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn pretty(&self) -> String {
        match self {
            Cell::Float(v, style) => match style {
                Style::Sig3 => format_sig(*v, 3),
                Style::Ratio => format_ratio(*v),
                Style::Fixed2 => format!("{v:.2}"),
                Style::Sig10 => format_sig(*v, 10),
            },
            other => other.csv(),
        }
    }
}

fn non_finite(v: f64) -> &'static str {
    if v.is_nan() {
        "NaN"
    } else if v > 0.0 {
        "Infinity"
    } else {
        "-Infinity"
    }
}

pub type Row = Vec<(&'static str, Cell)>;

pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub rows: Vec<Row>,
    pub suites: Vec<SuiteResult>,
    /// Free-text lines shown under the table in pretty mode only.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Self { command, config, rows: Vec::new(), suites: Vec::new(), notes: Vec::new() }
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => self.render_json(out),
            Format::Csv => self.render_csv(out),
            Format::Pretty => self.render_pretty(out),
        }
    }

    fn render_json(&self, out: &mut dyn Write) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(row.iter().map(|(k, c)| (k.to_string(), c.json())).collect::<Map<_, _>>()))
            .collect();
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                json!({
                    "name": s.name,
                    "passed": s.passed,
                    "worst_margin": Cell::Float(s.worst_margin, Style::Sig10).json(),
                    "cases": s.cases,
                    "failure": s.failure,
                })
            })
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "rows": rows,
            "suites": suites,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
        Ok(())
    }

    fn table(&self) -> (Vec<&'static str>, Vec<Vec<Cell>>) {
        if !self.suites.is_empty() {
            let header = vec!["suite", "passed", "cases", "worst_margin", "failure"];
            let body = self
                .suites
                .iter()
                .map(|s| {
                    vec![
                        Cell::Text(s.name.clone()),
                        Cell::Bool(s.passed),
                        Cell::Int(s.cases as i64),
                        Cell::sig(s.worst_margin),
                        Cell::Text(s.failure.clone().unwrap_or_default()),
                    ]
                })
                .collect();
            return (header, body);
        }
        let header = self.rows.first().map(|r| r.iter().map(|(k, _)| *k).collect()).unwrap_or_default();
        let body = self.rows.iter().map(|r| r.iter().map(|(_, c)| c.clone()).collect()).collect();
        (header, body)
    }

    fn render_csv(&self, out: &mut dyn Write) -> Result<()> {
        let (header, body) = self.table();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&header)?;
        for row in body {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    fn render_pretty(&self, out: &mut dyn Write) -> Result<()> {
        let (header, body) = self.table();
        let text: Vec<Vec<String>> = body.iter().map(|r| r.iter().map(Cell::pretty).collect()).collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &text {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(header.clone()))?;
        for row in &text {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        for note in &self.notes {
            writeln!(out, "{note}")?;
        }
        Ok(())
    }
}
