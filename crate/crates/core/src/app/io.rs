use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TimeSeries;

/// Column of a CSV file, by 1-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(1)
    }
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.trim().to_string()),
        })
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    ParseError { line: u64, message: String },
    #[error("column {0} not found")]
    ColumnNotFound(String),
    #[error("no samples in input")]
    EmptySeries,
}

/// Reads one column of numbers. A first row whose selected field is not a
/// number is taken as a header; blank lines are skipped.
pub fn load_csv(path: &Path, column: &ColumnSelector) -> Result<TimeSeries, LoadError> {
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => LoadError::FileNotFound(path.to_path_buf()),
        _ => LoadError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    })?;
    parse_csv(&bytes, column)
}

pub fn parse_csv(bytes: &[u8], column: &ColumnSelector) -> Result<TimeSeries, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let mut index = match column {
        ColumnSelector::Index(0) => return Err(LoadError::ColumnNotFound("0 (indices start at 1)".into())),
        ColumnSelector::Index(i) => Some(i - 1),
        ColumnSelector::Name(_) => None,
    };
    let mut values = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| LoadError::ParseError {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            if let ColumnSelector::Name(name) = column {
                let pos = record
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| LoadError::ColumnNotFound(name.clone()))?;
                index = Some(pos);
                continue;
            }
            let i = index.unwrap_or(0);
            match record.get(i) {
                None => return Err(LoadError::ColumnNotFound(column.to_string())),
                Some(field) if field.parse::<f64>().is_err() => continue,
                Some(_) => {}
            }
        }
        let i = index.unwrap_or(0);
        let field = record.get(i).ok_or_else(|| LoadError::ParseError {
            line,
            message: format!("missing column {column}"),
        })?;
        let value = field.parse::<f64>().map_err(|_| LoadError::ParseError {
            line,
            message: format!("'{field}' is not a number"),
        })?;
        if !value.is_finite() {
            return Err(LoadError::ParseError {
                line,
                message: format!("'{field}' is not finite"),
            });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(LoadError::EmptySeries);
    }
    TimeSeries::new(values).map_err(|_| LoadError::EmptySeries)
}

/// One value per line, shortest representation that parses back exactly.
pub fn series_to_csv(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
