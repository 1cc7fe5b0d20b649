//! Rendering of command results as JSON (default), CSV, or LaTeX tables.

use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "latex" => Ok(Format::Latex),
            other => Err(format!("unknown format '{other}' (json|csv|latex)")),
        }
    }
}

/// A command result: a JSON value plus a tabular view for csv/latex.
pub struct Doc {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Doc {
    /// A one-row table from (key, value) pairs, with the same data as the
    /// JSON object.
    pub fn scalar(pairs: Vec<(&str, Value)>) -> Self {
        let headers: Vec<String> = pairs.iter().map(|(k, _)| k.to_string()).collect();
        let row: Vec<String> = pairs.iter().map(|(_, v)| plain(v)).collect();
        let json = Value::Object(
            pairs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        );
        Doc {
            json,
            headers,
            rows: vec![row],
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("valid json"),
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&csv_row(&self.headers));
                for row in &self.rows {
                    out.push('\n');
                    out.push_str(&csv_row(row));
                }
                out
            }
            Format::Latex => {
                let cols = "l".repeat(self.headers.len().max(1));
                let mut out = format!("\\begin{{tabular}}{{{cols}}}\n");
                out.push_str(&self.headers.join(" & "));
                out.push_str(" \\\\\n\\hline\n");
                for row in &self.rows {
                    out.push_str(&row.join(" & "));
                    out.push_str(" \\\\\n");
                }
                out.push_str("\\end{tabular}");
                out
            }
        }
    }
}

fn csv_row(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains(',') || c.contains('"') || c.contains('\n') {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// A flat string for table cells.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
