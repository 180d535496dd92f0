//! Runtime scaling benchmark on uniform random data.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binning::{bin_assign, AttributeSpec};
use crate::filtration::FilterMode;
use crate::geometry::{Point2D, PointSet2D};
use crate::pipeline::{compute_rangeset, suggest_epsilon};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    /// Median wall time of one binned rangeset computation.
    pub seconds: f64,
    pub per_point_us: f64,
    pub polygons: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub bins: usize,
    pub rows: Vec<BenchRow>,
    /// Least-squares fit `seconds = slope * n + intercept`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl BenchReport {
    /// Per-point cost at `a` divided by per-point cost at `b`.
    pub fn per_point_ratio(&self, a: usize, b: usize) -> Option<f64> {
        let cost = |n| self.rows.iter().find(|r| r.n == n).map(|r| r.per_point_us);
        Some(cost(a)? / cost(b)?)
    }
}

/// Times the rangeset of a uniformly random attribute over `n` uniform
/// points in the unit square, at the suggested ε, for each `n`.
pub fn bench(ns: &[usize], bins: usize, repeats: usize, seed: u64) -> BenchReport {
    let repeats = repeats.max(1);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let pts: Vec<Point2D> = (0..n).map(|_| Point2D::new(rng.gen(), rng.gen())).collect();
        let values: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let points = PointSet2D::new(pts).expect("finite");
        let epsilon = suggest_epsilon(&points).expect("random points are in general position");
        let spec = AttributeSpec::continuous("value", &values).and_then(|s| s.with_bins(bins)).expect("valid spec");

        let mut times = Vec::with_capacity(repeats);
        let mut polygons = 0;
        for _ in 0..repeats {
            let start = Instant::now();
            let binned = bin_assign(&values, &spec).expect("valid spec");
            let rs = compute_rangeset(&points, &binned, &spec, epsilon, FilterMode::EdgeLength).expect("valid input");
            times.push(start.elapsed().as_secs_f64());
            polygons = rs.polygon_count();
        }
        times.sort_by(f64::total_cmp);
        let seconds = times[times.len() / 2];
        rows.push(BenchRow { n, seconds, per_point_us: seconds * 1e6 / n as f64, polygons });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.seconds).collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    BenchReport { bins, rows, slope, intercept, r_squared }
}

/// Ordinary least squares `y = a x + b`; returns `(a, b, R²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (0.0, ys.first().copied().unwrap_or(0.0), 1.0);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (a, b, r2)
}
