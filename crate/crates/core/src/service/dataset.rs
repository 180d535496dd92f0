//! CSV ingestion with per-column type inference.
//!
//! A column is continuous when every non-missing cell parses as a number and
//! categorical otherwise; a config override can force either kind. Missing
//! cells are `""`, `"NA"` and `"NaN"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::config::AttributeOverride;
use crate::binning::AttributeKind;

pub const MISSING_MARKERS: [&str; 3] = ["", "NA", "NaN"];

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("cannot read dataset {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column `{column}`: {message}")]
    ParseError { line: usize, column: String, message: String },
    #[error("dataset has no data rows")]
    EmptyDataset,
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    /// Missing cells are NaN.
    Numeric(Vec<f64>),
    Categorical(Vec<Option<String>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
    /// Row ids with a missing cell.
    pub missing: Vec<usize>,
}

impl Column {
    pub fn kind(&self) -> AttributeKind {
        match self.data {
            ColumnData::Numeric(_) => AttributeKind::Continuous,
            ColumnData::Categorical(_) => AttributeKind::Categorical,
        }
    }

    pub fn numeric(&self) -> Option<&[f64]> {
        match &self.data {
            ColumnData::Numeric(v) => Some(v),
            ColumnData::Categorical(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub rows: usize,
    pub columns: Vec<Column>,
    /// `sha256:` hash of the raw file bytes.
    pub fingerprint: String,
}

/// Per-column missing counts, in column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingReport {
    pub column: String,
    pub missing: usize,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Result<&Column, DatasetError> {
        self.columns.iter().find(|c| c.name == name).ok_or_else(|| DatasetError::UnknownColumn(name.into()))
    }

    pub fn names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn missing_report(&self) -> Vec<MissingReport> {
        self.columns.iter().map(|c| MissingReport { column: c.name.clone(), missing: c.missing.len() }).collect()
    }
}

pub fn load_dataset(path: &Path, overrides: &BTreeMap<String, AttributeOverride>) -> Result<Dataset, DatasetError> {
    let bytes = std::fs::read(path)
        .map_err(|e| DatasetError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_dataset(&bytes, overrides)
}

pub fn parse_dataset(bytes: &[u8], overrides: &BTreeMap<String, AttributeOverride>) -> Result<Dataset, DatasetError> {
    let fingerprint = format!("sha256:{}", hex::encode(Sha256::digest(bytes)));
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(e, "<header>"))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(DatasetError::EmptyDataset);
    }

    let mut cells: Vec<Vec<Option<String>>> = vec![Vec::new(); header.len()];
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, "<row>"))?;
        for (c, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            cells[c].push(if MISSING_MARKERS.contains(&cell) { None } else { Some(cell.to_string()) });
        }
    }
    let rows = cells[0].len();
    if rows == 0 {
        return Err(DatasetError::EmptyDataset);
    }

    let mut columns = Vec::with_capacity(header.len());
    for (name, raw) in header.into_iter().zip(cells) {
        let forced = overrides.get(&name).and_then(|o| o.kind);
        let missing: Vec<usize> = (0..rows).filter(|&r| raw[r].is_none()).collect();
        let parsed: Vec<Result<f64, usize>> = raw
            .iter()
            .enumerate()
            .map(|(r, cell)| match cell {
                None => Ok(f64::NAN),
                Some(s) => s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(r),
            })
            .collect();
        let numeric_ok = parsed.iter().all(Result::is_ok);
        let data = match forced {
            Some(AttributeKind::Categorical) => ColumnData::Categorical(raw),
            Some(AttributeKind::Continuous) if !numeric_ok => {
                let r = parsed.iter().find_map(|p| p.err()).unwrap_or(0);
                return Err(DatasetError::ParseError {
                    line: r + 2,
                    column: name,
                    message: format!("`{}` is not a number", raw[r].as_deref().unwrap_or("")),
                });
            }
            _ if numeric_ok && missing.len() < rows => {
                ColumnData::Numeric(parsed.into_iter().map(|p| p.unwrap_or(f64::NAN)).collect())
            }
            Some(AttributeKind::Continuous) => ColumnData::Numeric(vec![f64::NAN; rows]),
            None => ColumnData::Categorical(raw),
        };
        columns.push(Column { name, data, missing });
    }
    Ok(Dataset { rows, columns, fingerprint })
}

fn csv_error(e: csv::Error, column: &str) -> DatasetError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    DatasetError::ParseError { line, column: column.to_string(), message: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Dataset, DatasetError> {
        parse_dataset(text.as_bytes(), &BTreeMap::new())
    }

    #[test]
    fn infers_kinds() {
        let d = parse("a,b,c\n1,x,2.5\n2,y,-1e3\n").unwrap();
        assert_eq!(d.rows, 2);
        assert_eq!(d.columns.iter().map(Column::kind).collect::<Vec<_>>(), vec![
            AttributeKind::Continuous,
            AttributeKind::Categorical,
            AttributeKind::Continuous
        ]);
        assert_eq!(d.column("c").unwrap().numeric().unwrap(), &[2.5, -1000.0]);
    }

    #[test]
    fn missing_markers_are_flagged() {
        let d = parse("a,b\nNA,x\n2,\nNaN,NA\n4,y\n").unwrap();
        let a = d.column("a").unwrap();
        assert_eq!(a.kind(), AttributeKind::Continuous);
        assert_eq!(a.missing, vec![0, 2]);
        assert!(a.numeric().unwrap()[0].is_nan());
        assert_eq!(d.column("b").unwrap().missing, vec![1, 2]);
        assert_eq!(d.missing_report()[0], MissingReport { column: "a".into(), missing: 2 });
    }

    #[test]
    fn zero_rows_is_empty() {
        assert_eq!(parse("a,b\n").unwrap_err(), DatasetError::EmptyDataset);
        assert_eq!(parse("").unwrap_err(), DatasetError::EmptyDataset);
    }

    #[test]
    fn ragged_row_reports_its_line() {
        match parse("a,b\n1,2\n3\n").unwrap_err() {
            DatasetError::ParseError { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn forced_kinds() {
        let mut o = BTreeMap::new();
        o.insert("a".to_string(), AttributeOverride { kind: Some(AttributeKind::Categorical), ..Default::default() });
        o.insert("b".to_string(), AttributeOverride { kind: Some(AttributeKind::Continuous), ..Default::default() });
        let err = parse_dataset(b"a,b\n1,2\n3,oops\n", &o).unwrap_err();
        assert_eq!(err, DatasetError::ParseError { line: 3, column: "b".into(), message: "`oops` is not a number".into() });
        let d = parse_dataset(b"a,b\n1,2\n3,4\n", &o).unwrap();
        assert_eq!(d.column("a").unwrap().kind(), AttributeKind::Categorical);
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = parse("a\n1\n").unwrap().fingerprint;
        assert_eq!(a, parse("a\n1\n").unwrap().fingerprint);
        assert_ne!(a, parse("a\n2\n").unwrap().fingerprint);
        assert!(a.starts_with("sha256:"));
    }
}
