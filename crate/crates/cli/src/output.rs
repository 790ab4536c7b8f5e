//! Locale-independent CSV and JSON rendering.

use crate::error::CliError;
use serde::Serialize;
use std::fmt::Write as _;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as usize)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<Option<usize>> for Field {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Field::Empty, Field::Int)
    }
}

/// 17 significant digits in scientific notation, `inf`/`-inf`/`NaN` otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Float(v) => f.write_str(&format_float(*v)),
            Field::Int(v) => write!(f, "{v}"),
            Field::Bool(v) => write!(f, "{v}"),
            Field::Text(s) => f.write_str(s),
            Field::Empty => Ok(()),
        }
    }
}

/// A CSV table written row by row with LF line endings.
#[derive(Debug, Clone)]
pub struct Csv {
    columns: usize,
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            columns: header.len(),
            buf: format!("{}\n", header.join(",")),
        }
    }

    /// Starts the file with `# <json>` before the header line.
    pub fn with_comment<T: Serialize>(header: &[&str], comment: &T) -> Result<Self, CliError> {
        let json = serde_json::to_string(comment).map_err(|e| CliError::Config(e.to_string()))?;
        let mut csv = Csv::new(header);
        csv.buf.insert_str(0, &format!("# {json}\n"));
        Ok(csv)
    }

    pub fn row(&mut self, fields: Vec<Field>) {
        assert_eq!(fields.len(), self.columns, "row width does not match the header");
        let line: Vec<String> = fields.iter().map(Field::to_string).collect();
        let _ = writeln!(self.buf, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
