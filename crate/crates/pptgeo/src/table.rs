//! Deterministic CSV and JSON serialization.
//!
//! Reals are written with 17 significant digits in scientific notation, so
//! every f64 round-trips and identical values give identical bytes. JSON
//! objects have sorted keys.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::error::{io, CliError, Result};

/// `{:.16e}` for finite values; `NaN`, `inf` and `-inf` otherwise.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    /// Non-finite reals become null.
    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(v) => Value::String(v.clone()),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rows under a fixed column schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// Panics if the row does not match the schema width.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the schema");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("writing to memory");
        }
        w.into_inner().expect("writing to memory")
    }

    /// An array of objects keyed by column name.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect::<Map<String, Value>>()))
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => render_json(&self.to_json_value()),
        }
    }
}

/// Compact JSON whose floats use [`format_real`].
struct FixedFloat;

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_real(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes with sorted keys and fixed float formatting, newline-terminated.
pub fn render_json(v: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloat);
    v.serialize(&mut ser).expect("writing to memory");
    out.push(b'\n');
    out
}

pub fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to `path` and returns their SHA-256.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<String> {
    std::fs::write(path, bytes).map_err(io(path))?;
    Ok(checksum(bytes))
}

/// Serializes `table` to `path` in `format` and returns the SHA-256 of the bytes.
pub fn emit_table(table: &Table, path: &Path, format: Format) -> Result<String> {
    write_bytes(path, &table.render(format))
}

/// Reads a CSV table or a JSON array of objects back as strings by column.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = std::fs::read_to_string(path).map_err(io(path))?;
    let bad = |msg: String| CliError::Format { path: path.to_path_buf(), msg };
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let rows = v.as_array().ok_or_else(|| bad("expected an array of rows".into()))?;
        let columns: Vec<String> = match rows.first().and_then(Value::as_object) {
            Some(obj) => obj.keys().cloned().collect(),
            None => Vec::new(),
        };
        let cells = rows
            .iter()
            .map(|r| {
                let obj = r.as_object().ok_or_else(|| bad("row is not an object".into()))?;
                columns
                    .iter()
                    .map(|c| match obj.get(c) {
                        Some(Value::String(s)) => Ok(s.clone()),
                        Some(Value::Null) => Ok("NaN".into()),
                        Some(other) => Ok(other.to_string()),
                        None => Err(bad(format!("row is missing column {c:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        return Ok((columns, cells));
    }
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let columns = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()).map_err(|e| bad(e.to_string()))).collect::<Result<_>>()?;
    Ok((columns, rows))
}
