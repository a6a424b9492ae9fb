use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

/// Default output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "SRBFLOW_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// Columns of numbers, written as CSV with full precision or as JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Where a command's result goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    /// `--out` wins; otherwise `$SRBFLOW_OUT_DIR/<stem>.<ext>`; otherwise stdout.
    pub fn resolve(out: Option<PathBuf>, stem: &str, format: Format) -> Self {
        if let Some(p) = out {
            return Self::File(p);
        }
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => {
                Self::File(Path::new(&dir).join(format!("{stem}.{}", format.extension())))
            }
            _ => Self::Stdout,
        }
    }

    pub fn open(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match self {
            Self::Stdout => Box::new(io::stdout().lock()),
            Self::File(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            )),
        })
    }

    pub fn write_table(&self, table: &Table, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => table.write_csv(self.open()?),
            Format::Json => self.write_json(table),
        }
    }

    pub fn write_json<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        let mut w = self.open()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

/// `--format` wins, then a `.json`/`.csv` extension on `--out`, then `fallback`.
pub fn resolve_format(flag: Option<Format>, out: Option<&Path>, fallback: Format) -> Format {
    flag.unwrap_or_else(|| match out.and_then(|p| p.extension()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_seventeen_digits() {
        let mut t = Table::new(vec!["t".into(), "x".into()]);
        t.push(vec![0.0, 1.0 / 3.0]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,x\n0.0000000000000000e0,3.3333333333333331e-1\n");
        let parsed: f64 = "3.3333333333333331e-1".parse().unwrap();
        assert_eq!(parsed, 1.0 / 3.0);
    }

    #[test]
    fn format_inference() {
        let csv = Format::Csv;
        assert_eq!(
            resolve_format(None, Some(Path::new("a.JSON")), csv),
            Format::Json
        );
        assert_eq!(
            resolve_format(None, Some(Path::new("a.csv")), Format::Json),
            csv
        );
        assert_eq!(
            resolve_format(Some(csv), Some(Path::new("a.json")), csv),
            csv
        );
        assert_eq!(
            resolve_format(None, Some(Path::new("a.txt")), Format::Json),
            Format::Json
        );
        assert_eq!(resolve_format(None, None, csv), csv);
    }
}
