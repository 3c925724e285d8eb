//! Deterministic tabular output.
//!
//! Every command renders a [`Table`]: a manifest (column documentation,
//! emitted as `#` comment lines in CSV and a string array in JSON), a
//! header, and rows of typed values.  Formatting is bit-stable: floats
//! print with five fixed decimals by default (matching the reference
//! tables) or in shortest round-trip form under full precision;
//! rationals print as five-decimal roundings or exact fractions.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;

use crate::config::format_exact;
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Output encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
}

impl FromStr for OutFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            other => Err(Error::Config(format!(
                "unknown output format {other:?} (expected csv or json)"
            ))),
        }
    }
}

/// Value formatter: fixed five decimals by default, shortest
/// round-trip / exact fractions in full-precision mode.
#[derive(Clone, Copy, Debug, Default)]
pub struct NumberFormat {
    pub full_precision: bool,
}

impl NumberFormat {
    #[must_use]
    pub fn new(full_precision: bool) -> Self {
        NumberFormat { full_precision }
    }

    /// Formats a float; `-0.00000` is normalized to `0.00000`.
    #[must_use]
    pub fn f64(&self, x: f64) -> String {
        if self.full_precision {
            return format!("{x}");
        }
        let s = format!("{x:.5}");
        if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    /// Formats a rational: five-decimal rounding, or the exact fraction
    /// in full-precision mode.
    #[must_use]
    pub fn rat(&self, x: &Rat) -> String {
        if self.full_precision {
            format_exact(x)
        } else {
            rat::to_decimal(x, 5)
        }
    }

    /// Formats a complex number as `a+bi` / `a-bi`.
    #[must_use]
    pub fn complex(&self, z: Complex64) -> String {
        let re = self.f64(z.re);
        let im = self.f64(z.im.abs());
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{re}{sign}{im}i")
    }
}

/// One table cell.
#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Float(f64),
    Exact(Rat),
    Complex(Complex64),
    Text(String),
}

impl Value {
    fn render(&self, fmt: &NumberFormat) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Float(x) => fmt.f64(*x),
            Value::Exact(x) => fmt.rat(x),
            Value::Complex(z) => fmt.complex(*z),
            Value::Text(s) => s.clone(),
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}
impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}
impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}
impl From<Rat> for Value {
    fn from(x: Rat) -> Self {
        Value::Exact(x)
    }
}
impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex(z)
    }
}
impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}
impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

/// A finished table ready for rendering.
#[derive(Clone, Debug)]
pub struct Table {
    title: String,
    manifest: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(title: S, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            manifest: Vec::new(),
            columns: columns.iter().map(|c| (*c).to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Adds one manifest line documenting the table or a column.
    pub fn note<S: Into<String>>(&mut self, line: S) -> &mut Self {
        self.manifest.push(line.into());
        self
    }

    /// Appends a row; the width must match the header.
    pub fn push_row(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Invariant(format!(
                "table {:?}: row has {} cells, header has {}",
                self.title,
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    #[must_use]
    pub fn title(&self) -> &str {
        &self.title
    }

    #[must_use]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Renders to a string in the requested format.
    pub fn render(&self, format: OutFormat, fmt: &NumberFormat) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf, format, fmt)?;
        String::from_utf8(buf).map_err(|e| Error::Invariant(format!("non-UTF-8 output: {e}")))
    }

    /// Writes to any sink in the requested format.
    pub fn write_to(&self, w: &mut dyn Write, format: OutFormat, fmt: &NumberFormat) -> Result<()> {
        match format {
            OutFormat::Csv => self.write_csv(w, fmt),
            OutFormat::Json => self.write_json(w, fmt),
        }
    }

    fn write_csv(&self, w: &mut dyn Write, fmt: &NumberFormat) -> Result<()> {
        let io_err = |e: std::io::Error| Error::Io(format!("writing table: {e}"));
        writeln!(w, "# {}", self.title).map_err(io_err)?;
        for line in &self.manifest {
            writeln!(w, "# {line}").map_err(io_err)?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.columns)
            .map_err(|e| Error::Io(format!("writing table: {e}")))?;
        for row in &self.rows {
            csv.write_record(row.iter().map(|v| v.render(fmt)))
                .map_err(|e| Error::Io(format!("writing table: {e}")))?;
        }
        csv.flush().map_err(io_err)?;
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write, fmt: &NumberFormat) -> Result<()> {
        // All cell values are emitted as the same strings as in CSV so
        // that exactness and byte stability are format-independent.
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .zip(row.iter())
                    .map(|(c, v)| (c.clone(), serde_json::Value::String(v.render(fmt))))
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({
            "title": self.title,
            "manifest": self.manifest,
            "columns": self.columns,
            "rows": rows,
        });
        let text = serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Io(format!("encoding table: {e}")))?;
        writeln!(w, "{text}").map_err(|e| Error::Io(format!("writing table: {e}")))?;
        Ok(())
    }
}

/// Renders an integer-vector label like `(-3, 4, 0)` without internal
/// commas, so it stays a single CSV field: `(-3 4 0)`.
#[must_use]
pub fn format_int_vector(v: &[i64]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x}");
    }
    s.push(')');
    s
}

/// Renders an exact coordinate vector the same way: `(2 -4 1)`.
#[must_use]
pub fn format_rat_vector(v: &[Rat]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{}", format_exact(x));
    }
    s.push(')');
    s
}
