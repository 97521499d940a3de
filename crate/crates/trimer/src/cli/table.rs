//! Self-describing tabular output: CSV with a `#`-comment metadata header
//! or JSON with an explicit metadata object. Floats are written with 17
//! significant digits so either format round-trips bit-exactly.

use crate::{Error, Result};
use serde_json::{json, Map, Value as Json};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format {other:?} (use csv|json)"))),
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    /// Absent optional quantity (empty CSV field, JSON null).
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}
impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Missing, Value::Float)
    }
}
impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}
impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}
impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

/// Record table with fixed column order and a metadata block carrying the
/// fully resolved configuration.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub metadata: Map<String, Json>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        let mut metadata = Map::new();
        metadata.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Table { columns, rows: Vec::new(), metadata }
    }

    pub fn meta(&mut self, key: &str, value: Json) {
        self.metadata.insert(key.to_owned(), value);
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV rendering: `# key = value` metadata lines, a header row, then one
    /// record per line with `.` decimal separator and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Float(x) => format!("{x:.16e}"),
                    Value::Int(i) => i.to_string(),
                    Value::Str(s) => csv_quote(s),
                    Value::Bool(b) => b.to_string(),
                    Value::Missing => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON rendering: `{"metadata": {...}, "records": [{col: value, ...}]}`.
    pub fn to_json(&self) -> Json {
        let records: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    let jv = match v {
                        Value::Float(x) => json!(x),
                        Value::Int(i) => json!(i),
                        Value::Str(s) => json!(s),
                        Value::Bool(b) => json!(b),
                        Value::Missing => Json::Null,
                    };
                    obj.insert((*c).to_owned(), jv);
                }
                Json::Object(obj)
            })
            .collect();
        json!({ "metadata": Json::Object(self.metadata.clone()), "records": records })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => format!("{:#}\n", self.to_json()),
        }
    }
}

/// RFC-4180 quoting for text fields containing separators or quotes.
fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Writes the rendered table to `path`, or to standard output when absent.
pub fn emit(table: &Table, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let body = table.render(format);
    match path {
        Some(p) => std::fs::write(p, body).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}
