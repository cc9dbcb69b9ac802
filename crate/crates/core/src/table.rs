//! Column-labelled result tables with CSV and JSON writers.
//!
//! CSV dialect: comma separated, header row, LF line endings. Floats are
//! written with 17 significant digits in exponent form so that parsing a
//! file back yields bit-identical values.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value as Json};

use crate::error::{OttoError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Value {
    pub fn opt(v: Option<f64>) -> Value {
        v.map_or(Value::Empty, Value::Num)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    fn to_field(&self) -> String {
        match self {
            Value::Num(v) => format!("{v:.16e}"),
            Value::Int(v) => v.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Empty => String::new(),
        }
    }

    fn from_field(s: &str) -> Value {
        if s.is_empty() {
            return Value::Empty;
        }
        match s {
            "true" => return Value::Bool(true),
            "false" => return Value::Bool(false),
            _ => {}
        }
        if s.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(v) = s.parse() {
                return Value::Int(v);
            }
        }
        match s.parse::<f64>() {
            Ok(v) => Value::Num(v),
            Err(_) => Value::Text(s.to_owned()),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Num(v) => Number::from_f64(*v).map_or(Json::Null, Json::Number),
            Value::Int(v) => Json::Number((*v).into()),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::Empty => Json::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = OttoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(OttoError::validation(
                "format",
                format!("expected csv or json, got {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of a column, or `None` if the column does not exist.
    pub fn values(&self, name: &str) -> Option<Vec<&Value>> {
        let idx = self.column(name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_field))?;
        }
        let bytes = w.into_inner().map_err(|e| OttoError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| OttoError::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(str::to_owned).collect();
        let mut table = Table {
            columns,
            rows: Vec::new(),
        };
        for rec in r.records() {
            let rec = rec?;
            table.rows.push(rec.iter().map(Value::from_field).collect());
        }
        Ok(table)
    }

    /// Array of row objects, keys in column order.
    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Value::to_json))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Write to `path`, or to stdout when `path` is `None`.
    pub fn write(&self, path: Option<&Path>, format: Format) -> Result<()> {
        let text = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    /// Aligned plain-text rendering for terminals.
    pub fn pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        Value::Num(x) => format!("{x:.6}"),
                        other => other.to_field(),
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain(std::iter::once(self.columns[i].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let parts: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &self.columns);
        for r in &cells {
            line(&mut out, r);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Table {
        let mut t = Table::new(["r", "xi", "eta", "extracting", "class", "steps"]);
        t.push(vec![
            0.1.into(),
            0.0.into(),
            Value::Empty,
            false.into(),
            "no_work".into(),
            0usize.into(),
        ]);
        t.push(vec![
            1.0.into(),
            0.2.into(),
            0.798_276_735_695_090_2.into(),
            true.into(),
            "engine_above_carnot".into(),
            4096usize.into(),
        ]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "r,xi,eta,extracting,class,steps");
        assert_eq!(
            lines.next().unwrap(),
            "1.0000000000000001e-1,0.0000000000000000e0,,false,no_work,0"
        );
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        assert_eq!(Table::from_csv(&t.to_csv().unwrap()).unwrap(), t);
    }

    #[test]
    fn json_keeps_column_order_and_nulls() {
        let json = sample().to_json().unwrap();
        let r = json.find("\"r\"").unwrap();
        let xi = json.find("\"xi\"").unwrap();
        assert!(r < xi);
        assert!(json.contains("\"eta\": null"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed[1]["steps"], 4096);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }

    proptest! {
        #[test]
        fn floats_round_trip_bit_exact(values in proptest::collection::vec(any::<f64>(), 1..40)) {
            let mut t = Table::new(["v"]);
            for v in &values {
                t.push(vec![Value::Num(*v)]);
            }
            let back = Table::from_csv(&t.to_csv().unwrap()).unwrap();
            for (row, v) in back.rows.iter().zip(&values) {
                match row[0] {
                    Value::Num(x) => prop_assert!(x.to_bits() == v.to_bits() || (x.is_nan() && v.is_nan())),
                    ref other => prop_assert!(false, "unexpected {:?}", other),
                }
            }
        }
    }
}
