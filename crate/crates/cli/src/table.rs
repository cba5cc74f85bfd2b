//! CSV tables with a `#` comment header.
//!
//! Floats are written with 17 significant digits, so reading a file back
//! reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Cell {
        if let Ok(i) = s.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(x) = s.parse::<f64>() {
            Cell::Float(x)
        } else {
            Cell::Text(s.to_string())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file_name: &str, columns: &[&str]) -> Self {
        Self {
            file_name: file_name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width in {}", self.file_name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Writes `header` lines (each prefixed with `# `), the column row, then data.
    pub fn write(&self, dir: &Path, header: &[String]) -> Result<PathBuf, CliError> {
        let path = dir.join(&self.file_name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut out = BufWriter::new(file);
        for line in header {
            writeln!(out, "# {line}").map_err(|e| CliError::io(&path, e))?;
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| CliError::io(&path, e.into());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Reads a table written by [`Table::write`]; returns it with its header
    /// lines (without the `# ` prefix).
    pub fn read(path: &Path) -> Result<(Table, Vec<String>), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let header: Vec<String> = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| l.trim_start_matches('#').trim_start().to_string())
            .collect();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let io = |e: csv::Error| CliError::io(path, e.into());
        let columns = r.headers().map_err(io)?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(Cell::parse).collect()))
            .collect::<Result<Vec<Vec<Cell>>, _>>()
            .map_err(io)?;
        let file_name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((
            Table {
                file_name,
                columns,
                rows,
            },
            header,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("x.csv", &["D", "w", "note"]);
        let awkward = [0.1 + 0.2, 1.0 / 3.0, f64::MIN_POSITIVE, -2.5e300, 0.0, 5e-324, f64::NAN];
        for (i, &x) in awkward.iter().enumerate() {
            t.push(vec![i.into(), x.into(), "saturated".into()]);
        }
        let path = t.write(dir.path(), &["hello".into(), "manifest_sha256: ab".into()]).unwrap();
        let (back, header) = Table::read(&path).unwrap();
        assert_eq!(header, vec!["hello", "manifest_sha256: ab"]);
        assert_eq!(back.columns, t.columns);
        for (a, b) in back.rows.iter().zip(&t.rows) {
            match (&a[1], &b[1]) {
                (Cell::Float(x), Cell::Float(y)) => assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan())),
                other => panic!("{other:?}"),
            }
            assert_eq!(a[0], b[0]);
            assert_eq!(a[2], b[2]);
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(Cell::Float(0.1).render(), "1.0000000000000001e-1");
        assert_eq!(Cell::Float(1.0).render(), "1.0000000000000000e0");
    }
}
