//! Classical (Torgerson) MDS and SMACOF stress majorization.
//!
//! Classical MDS double-centers the squared distance matrix and keeps the top
//! two eigenpairs. For Euclidean input the same eigenpairs come from the much
//! smaller `d x d` scatter matrix of the centered data, which is the route
//! [`classical_mds`] takes; [`classical_mds_from_distances`] works on an
//! explicit distance matrix. Classical MDS shrinks distances that do not fit
//! in the plane, so [`metric_mds`] refines its solution by minimizing raw
//! stress, which keeps embedded distances on the input scale.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{EmbeddingError, EmbeddingMethod, EmbeddingResult, HighDimMatrix};
use crate::geometry::{Point2D, PointSet2D};

const EIGEN_EPS: f64 = 1e-13;
const EIGEN_MAX_ITER: usize = 10_000;

/// Condensed symmetric distance matrix (upper triangle, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn euclidean(m: &HighDimMatrix) -> Self {
        let n = m.nrows();
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                values.push(m.squared_distance(i, j).sqrt());
            }
        }
        Self { n, values }
    }

    /// From a full square matrix; only the upper triangle is read.
    pub fn from_square(rows: &[Vec<f64>]) -> Result<Self, EmbeddingError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(EmbeddingError::Shape("distance matrix must be square".into()));
        }
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for (i, row) in rows.iter().enumerate() {
            values.extend_from_slice(&row[i + 1..]);
        }
        Ok(Self { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        // offset of row i in the condensed layout
        self.values[i * self.n - i * (i + 1) / 2 + (j - i - 1)]
    }
}

/// Classical MDS of the rows of `m` (Euclidean distances).
pub fn classical_mds(m: &HighDimMatrix) -> Result<EmbeddingResult, EmbeddingError> {
    let n = m.nrows();
    if n < 3 {
        return Err(EmbeddingError::TooFewRows { needed: 3, got: n });
    }
    let d = m.ncols();
    if d >= n {
        return classical_mds_from_distances(&DistanceMatrix::euclidean(m));
    }

    let means: Vec<f64> = (0..d).map(|c| m.column(c).iter().sum::<f64>() / n as f64).collect();
    let centered = DMatrix::from_fn(n, d, |r, c| m.get(r, c) - means[c]);
    let scatter = centered.transpose() * &centered;
    let eig = SymmetricEigen::try_new(scatter, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(EmbeddingError::EigenFailure)?;
    let order = descending(eig.eigenvalues.as_slice());

    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(2);
    for k in 0..2 {
        let axis = match order.get(k) {
            Some(&idx) if eig.eigenvalues[idx] > 0.0 => {
                let v = eig.eigenvectors.column(idx);
                (&centered * v).iter().copied().collect()
            }
            _ => vec![0.0; n],
        };
        axes.push(axis);
    }
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    finish(axes, eigenvalues, &DistanceSource::Matrix(m), EmbeddingMethod::ClassicalMds)
}

/// Classical MDS from explicit pairwise distances via the double-centered
/// squared-distance matrix.
pub fn classical_mds_from_distances(dist: &DistanceMatrix) -> Result<EmbeddingResult, EmbeddingError> {
    let n = dist.len();
    if n < 3 {
        return Err(EmbeddingError::TooFewRows { needed: 3, got: n });
    }
    let sq = DMatrix::from_fn(n, n, |i, j| dist.get(i, j).powi(2));
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let gram = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand));
    let eig = SymmetricEigen::try_new(gram, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(EmbeddingError::EigenFailure)?;
    let order = descending(eig.eigenvalues.as_slice());

    let mut axes = Vec::with_capacity(2);
    for k in 0..2 {
        let idx = order[k];
        let lambda = eig.eigenvalues[idx];
        let axis: Vec<f64> = if lambda > 0.0 {
            eig.eigenvectors.column(idx).iter().map(|v| v * lambda.sqrt()).collect()
        } else {
            vec![0.0; n]
        };
        axes.push(axis);
    }
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    finish(axes, eigenvalues, &DistanceSource::Condensed(dist), EmbeddingMethod::ClassicalMds)
}

#[derive(Debug, Clone, Copy)]
pub struct SmacofOptions {
    pub max_iter: usize,
    /// Stop once the relative stress decrease falls below this.
    pub tolerance: f64,
}

impl Default for SmacofOptions {
    fn default() -> Self {
        Self { max_iter: 300, tolerance: 1e-9 }
    }
}

/// Metric MDS: SMACOF iterations (unit weights) started from the classical
/// solution, so the result is deterministic.
pub fn metric_mds(m: &HighDimMatrix, options: SmacofOptions) -> Result<EmbeddingResult, EmbeddingError> {
    let start = classical_mds(m)?;
    let dist = DistanceMatrix::euclidean(m);
    let n = dist.len();
    let mut x: Vec<[f64; 2]> = start.coords.as_slice().iter().map(|p| [p.x, p.y]).collect();
    let mut prev = raw_stress(&x, &dist);
    for _ in 0..options.max_iter {
        // Guttman transform: X <- B(X) X / n
        let mut next = vec![[0.0f64; 2]; n];
        for i in 0..n {
            let mut acc = [0.0f64; 2];
            let mut diag = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dx = x[i][0] - x[j][0];
                let dy = x[i][1] - x[j][1];
                let dij = dx.hypot(dy);
                if dij > 0.0 {
                    let b = dist.get(i, j) / dij;
                    acc[0] -= b * x[j][0];
                    acc[1] -= b * x[j][1];
                    diag += b;
                }
            }
            next[i] = [(acc[0] + diag * x[i][0]) / n as f64, (acc[1] + diag * x[i][1]) / n as f64];
        }
        x = next;
        let stress = raw_stress(&x, &dist);
        let done = prev - stress <= options.tolerance * prev.max(f64::MIN_POSITIVE);
        prev = stress;
        if done {
            break;
        }
    }
    let axes = vec![x.iter().map(|p| p[0]).collect(), x.iter().map(|p| p[1]).collect()];
    finish(axes, start.eigenvalues, &DistanceSource::Condensed(&dist), EmbeddingMethod::MetricMds)
}

/// Kruskal stress-1 of `coords` against `dist`.
pub fn kruskal_stress(coords: &PointSet2D, dist: &DistanceMatrix) -> f64 {
    stress_of(coords.as_slice(), |i, j| dist.get(i, j))
}

enum DistanceSource<'a> {
    Matrix(&'a HighDimMatrix),
    Condensed(&'a DistanceMatrix),
}

fn finish(
    mut axes: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    source: &DistanceSource<'_>,
    method: EmbeddingMethod,
) -> Result<EmbeddingResult, EmbeddingError> {
    for axis in &mut axes {
        fix_sign(axis);
    }
    let points: Vec<Point2D> = axes[0].iter().zip(&axes[1]).map(|(&x, &y)| Point2D::new(x, y)).collect();
    let stress = match source {
        DistanceSource::Matrix(m) => stress_of(&points, |i, j| m.squared_distance(i, j).sqrt()),
        DistanceSource::Condensed(d) => stress_of(&points, |i, j| d.get(i, j)),
    };
    let coords = PointSet2D::new(points).map_err(|_| EmbeddingError::EigenFailure)?;
    Ok(EmbeddingResult { coords, method, stress, quality: Vec::new(), eigenvalues })
}

/// Makes the first clearly nonzero entry positive.
fn fix_sign(axis: &mut [f64]) {
    let scale = axis.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if let Some(&first) = axis.iter().find(|v| v.abs() > 1e-12 * scale) {
        if first < 0.0 {
            axis.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

fn stress_of(points: &[Point2D], target: impl Fn(usize, usize) -> f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let t = target(i, j);
            let r = points[i].distance(&points[j]) - t;
            num += r * r;
            den += t * t;
        }
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

fn raw_stress(x: &[[f64; 2]], dist: &DistanceMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let r = (x[i][0] - x[j][0]).hypot(x[i][1] - x[j][1]) - dist.get(i, j);
            s += r * r;
        }
    }
    s
}
