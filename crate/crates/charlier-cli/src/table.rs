//! Row tables with a fixed header, written as RFC-4180 CSV or as one JSON document.

use std::io::Write;

use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl Field {
    pub fn text(s: impl Into<String>) -> Self {
        Field::Text(s.into())
    }

    pub fn opt_num(v: Option<f64>) -> Self {
        v.map_or(Field::Empty, Field::Num)
    }

    fn csv(&self) -> String {
        match self {
            Field::Int(i) => i.to_string(),
            Field::Num(v) => fmt_num(*v),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(i) => Value::from(*i),
            Field::Num(v) if v.is_finite() => Value::from(*v),
            Field::Num(v) => Value::from(fmt_num(*v)),
            Field::Text(s) => Value::from(s.as_str()),
            Field::Empty => Value::Null,
        }
    }
}

/// Fixed scientific format, so identical runs give identical bytes.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.12e}")
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub command: &'static str,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    /// Run-level values such as `a` and `n`, echoed in JSON only.
    pub meta: Vec<(&'static str, Field)>,
}

impl Table {
    pub fn new(command: &'static str, headers: Vec<&'static str>) -> Self {
        Self { command, headers, rows: Vec::new(), meta: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.headers).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv)).map_err(io_err)?;
        }
        w.flush().map_err(|e| CliError::Failure(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), SCHEMA_VERSION.into());
        doc.insert("command".into(), self.command.into());
        for (k, v) in &self.meta {
            doc.insert((*k).into(), v.json());
        }
        doc.insert("columns".into(), self.headers.iter().map(|h| Value::from(*h)).collect());
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.headers.iter().map(|h| h.to_string()).zip(r.iter().map(Field::json)).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        Value::Object(doc)
    }
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Failure(format!("writing CSV: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_rfc4180() {
        let mut t = Table::new("test", vec!["a", "b", "c"]);
        t.push(vec![Field::Int(1), Field::Num(0.5), Field::text("x;y,z")]);
        t.push(vec![Field::Empty, Field::Num(f64::INFINITY), Field::text("q\"")]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "a,b,c\r\n1,5.000000000000e-1,\"x;y,z\"\r\n,inf,\"q\"\"\"\r\n"
        );
    }

    #[test]
    fn json_rows_are_keyed() {
        let mut t = Table::new("test", vec!["a", "b"]);
        t.meta.push(("n", Field::Int(3)));
        t.push(vec![Field::Num(f64::NAN), Field::Empty]);
        let v = t.to_json();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["n"], 3);
        assert_eq!(v["rows"][0]["a"], "nan");
        assert!(v["rows"][0]["b"].is_null());
    }
}
