//! Per-point neighborhood preservation.
//!
//! Quality of point i is the Jaccard overlap between its k nearest neighbors
//! in the high-dimensional space and in the embedding: 1.0 means the
//! neighborhood survived the projection unchanged.

use super::{EmbeddingError, HighDimMatrix};
use crate::geometry::PointSet2D;

pub const DEFAULT_QUALITY_K: usize = 10;

pub fn projection_quality(m: &HighDimMatrix, coords: &PointSet2D, k: usize) -> Result<Vec<f64>, EmbeddingError> {
    let n = m.nrows();
    if coords.len() != n {
        return Err(EmbeddingError::RowCountMismatch { expected: n, got: coords.len() });
    }
    if k == 0 || k >= n {
        return Err(EmbeddingError::KTooLarge { k, n });
    }
    let pts = coords.as_slice();
    let mut quality = Vec::with_capacity(n);
    let mut high = Vec::with_capacity(n);
    let mut low = Vec::with_capacity(n);
    for i in 0..n {
        high.clear();
        low.clear();
        for j in (0..n).filter(|&j| j != i) {
            high.push((m.squared_distance(i, j), j));
            let (dx, dy) = (pts[i].x - pts[j].x, pts[i].y - pts[j].y);
            low.push((dx * dx + dy * dy, j));
        }
        let a = nearest(&mut high, k);
        let b = nearest(&mut low, k);
        let shared = a.iter().filter(|j| b.binary_search(j).is_ok()).count();
        quality.push(shared as f64 / (2 * k - shared) as f64);
    }
    Ok(quality)
}

/// Sorted ids of the `k` smallest distances; ties go to the smaller id.
fn nearest(cands: &mut [(f64, usize)], k: usize) -> Vec<usize> {
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < cands.len() {
        cands.select_nth_unstable_by(k - 1, cmp);
    }
    let mut ids: Vec<usize> = cands[..k].iter().map(|c| c.1).collect();
    ids.sort_unstable();
    ids
}
