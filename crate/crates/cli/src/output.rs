//! Deterministic CSV/JSON emission.
//!
//! CSV: one header line naming columns (units are gamma-based throughout),
//! then numeric rows at the configured precision. JSON: a metadata object
//! with all inputs and the tool version, the column names, and the rows,
//! with floats at 17 significant digits.

use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Value {
    Num(f64),
    Str(String),
}

pub struct Document {
    pub columns: Vec<String>,
    pub meta: Vec<(String, Value)>,
    pub rows: Vec<Vec<f64>>,
}

impl Document {
    pub fn new(columns: Vec<String>, meta: Vec<(String, Value)>) -> Self {
        Document {
            columns,
            meta,
            rows: Vec::new(),
        }
    }

    pub fn emit(&self, format: Format, precision: usize, path: Option<&str>) -> anyhow::Result<()> {
        let body = match format {
            Format::Csv => self.to_csv(precision),
            Format::Json => self.to_json(),
        };
        match path {
            Some(p) => std::fs::write(p, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }

    fn to_csv(&self, precision: usize) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        let digits = precision.clamp(1, 17) - 1;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.digits$e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"metadata\": {");
        for (i, (k, v)) in self.meta.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    ");
            out.push_str(&format!("\"{}\": {}", escape(k), json_value(v)));
        }
        out.push_str("\n  },\n  \"columns\": [");
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("\"{}\"", escape(c)));
        }
        out.push_str("],\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    [");
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push_str(&json_num(*v));
            }
            out.push(']');
        }
        out.push_str("\n  ]\n}\n");
        out
    }
}

fn json_value(v: &Value) -> String {
    match v {
        Value::Num(x) => json_num(*x),
        Value::Str(s) => format!("\"{}\"", escape(s)),
    }
}

/// 17 significant digits, round-trip exact for f64.
fn json_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no infinities; emit as strings
        format!("\"{x}\"")
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
