//! High-dimensional input, 2D embeddings and their per-point quality.

mod ingest;
mod mds;
mod quality;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PointSet2D;

pub use ingest::{ingest_embedding, ingest_embedding_reader};
pub use mds::{classical_mds, classical_mds_from_distances, kruskal_stress, metric_mds, DistanceMatrix, SmacofOptions};
pub use quality::{projection_quality, DEFAULT_QUALITY_K};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbeddingError {
    #[error("column `{0}` is constant and cannot be standardized")]
    ConstantColumn(String),
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("eigen-decomposition did not converge")]
    EigenFailure,
    #[error("k = {k} neighbors requested for {n} points (need 1 <= k < n)")]
    KTooLarge { k: usize, n: usize },
    #[error("embedding has {got} rows, dataset has {expected}")]
    RowCountMismatch { expected: usize, got: usize },
    #[error("line {line}: `{value}` is not a number")]
    NonNumeric { line: usize, value: String },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Dense row-major `n x d` matrix with column names.
#[derive(Debug, Clone, PartialEq)]
pub struct HighDimMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    names: Vec<String>,
}

impl HighDimMatrix {
    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self, EmbeddingError> {
        let cols = names.len();
        if cols == 0 {
            return Err(EmbeddingError::Shape("need at least one column".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(EmbeddingError::Shape(format!("row {r} has {} values, expected {cols}", row.len())));
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(EmbeddingError::NonFinite { row: r, col: c });
                }
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: rows.len(), cols, data, names })
    }

    pub fn from_columns(names: Vec<String>, columns: &[Vec<f64>]) -> Result<Self, EmbeddingError> {
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(EmbeddingError::Shape("columns differ in length".into()));
        }
        let rows: Vec<Vec<f64>> = (0..n).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
        Self::from_rows(names, &rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.row(i).iter().zip(self.row(j)).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}

/// Scales every column to mean 0 and unit (population) variance.
pub fn standardize(m: &HighDimMatrix) -> Result<HighDimMatrix, EmbeddingError> {
    let n = m.nrows() as f64;
    let mut out = m.clone();
    for c in 0..m.ncols() {
        let col = m.column(c);
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let sd = var.sqrt();
        if !(sd > 0.0) || sd <= 1e-12 * mean.abs() {
            return Err(EmbeddingError::ConstantColumn(m.names[c].clone()));
        }
        for r in 0..m.nrows() {
            out.data[r * m.cols + c] = (m.get(r, c) - mean) / sd;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingMethod {
    /// Torgerson scaling: deterministic and cheap at desk scale.
    #[default]
    ClassicalMds,
    /// Stress majorization (SMACOF) started from the classical solution.
    MetricMds,
    External,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingResult {
    pub coords: PointSet2D,
    pub method: EmbeddingMethod,
    /// Kruskal stress-1 of the 2D distances against the input distances.
    pub stress: f64,
    pub quality: Vec<f64>,
    /// Eigenvalues of the double-centered Gram matrix, non-increasing.
    pub eigenvalues: Vec<f64>,
}

impl EmbeddingResult {
    /// Share of the spectrum captured by the two retained axes.
    pub fn energy(&self) -> f64 {
        let total: f64 = self.eigenvalues.iter().map(|l| l.abs()).sum();
        if total == 0.0 {
            return 0.0;
        }
        self.eigenvalues.iter().take(2).sum::<f64>() / total
    }
}
