// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV output contract: a `# fluxsim v1` line, a header line, then rows with
//! floats in 17-significant-digit scientific notation. Output is
//! byte-identical for identical tables.

use std::path::Path;

use crate::{Error, Result};

pub const MAGIC: &str = "# fluxsim v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Round-trip exact rendering: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// Numeric values of a column; text cells become NaN.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[k] {
                    Cell::Num(v) => *v,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = ::csv::WriterBuilder::new()
            .terminator(::csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");
        format!("{MAGIC}\n{body}")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Parses text produced by [`Table::to_csv_string`]. Cells that parse as
    /// floats become numbers.
    pub fn parse(text: &str) -> Result<Table> {
        let body = text
            .strip_prefix(MAGIC)
            .and_then(|b| b.strip_prefix('\n'))
            .ok_or_else(|| Error::Io(format!("missing '{MAGIC}' line")))?;
        let mut r = ::csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let headers: Vec<String> = r
            .headers()
            .map_err(|e| Error::Io(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = Table::new(headers);
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
            table.push(
                rec.iter()
                    .map(|s| match s.parse::<f64>() {
                        Ok(v) if s != "-" => Cell::Num(v),
                        _ => Cell::Text(s.to_string()),
                    })
                    .collect(),
            );
        }
        Ok(table)
    }

    pub fn read(path: &Path) -> Result<Table> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Table::parse(&text)
    }
}
