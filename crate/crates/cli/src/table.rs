//! Row tables written as CSV or JSON.

use std::cmp::Ordering;

use serde_json::{Map, Value};

/// A named table whose rows are sorted by their leading columns before writing.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| cmp_value(x, y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().cloned()).collect();
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("table rows serialize");
        s.push('\n');
        s
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).expect("known column");
        self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn cmp_value(a: &Value, b: &Value) -> Ordering {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.to_string().cmp(&b.to_string()),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => "NA".into(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Number cell; non-finite values become strings so CSV and JSON agree.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::String("NaN".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_csv() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(vec![num(2.0), "x,y".into()]);
        t.push(vec![num(1.0), Value::Null]);
        t.sort();
        assert_eq!(t.to_csv(), "a,b\n1.0,NA\n2.0,\"x,y\"\n");
        assert_eq!(t.column("a"), vec![1.0, 2.0]);
    }
}
