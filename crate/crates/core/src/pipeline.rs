//! Rangeset assembly for one attribute.
//!
//! For each bin: take the embedded points of its members, triangulate them,
//! filter the triangulation at ε, trace the boundary and classify every member
//! as covered, outlier or uncovered. One ε is shared by all bins of the
//! attribute. Bins are independent and are computed on scoped threads; the
//! output order is the bin order regardless of completion order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binning::{AttributeSpec, BinnedAttribute};
use crate::filtration::{extract_boundary, filter_complex, ContourGeometry, FilterMode, FiltrationError};
use crate::geometry::{dedup_points, delaunay_triangulate, GeometryError, Point2D, PointSet2D};
use crate::mst::{default_epsilon_with, mst, MstError, QuantileMethod};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("{bins} bin assignments for {points} points")]
    LengthMismatch { points: usize, bins: usize },
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mst(#[from] MstError),
    #[error("computation superseded by a newer request")]
    Cancelled,
}

/// Contours and point classification for one bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinResult {
    pub bin_index: usize,
    pub label: String,
    pub color: String,
    pub member_ids: Vec<usize>,
    pub contours: Vec<ContourGeometry>,
    pub outlier_ids: Vec<usize>,
    pub uncovered_ids: Vec<usize>,
}

impl BinResult {
    /// Members covered by a contour triangle.
    pub fn covered_ids(&self) -> Vec<usize> {
        let mut excluded: Vec<usize> =
            self.outlier_ids.iter().chain(&self.uncovered_ids).copied().collect();
        excluded.sort_unstable();
        self.member_ids.iter().copied().filter(|id| excluded.binary_search(id).is_err()).collect()
    }

    pub fn polygon_count(&self) -> usize {
        self.contours.len()
    }

    pub fn area(&self) -> f64 {
        self.contours.iter().map(ContourGeometry::area).sum()
    }
}

/// All bins of one attribute at one ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rangeset {
    pub attribute: String,
    pub epsilon: f64,
    pub mode: FilterMode,
    pub bins: Vec<BinResult>,
}

impl Rangeset {
    pub fn outlier_counts(&self) -> Vec<usize> {
        self.bins.iter().map(|b| b.outlier_ids.len()).collect()
    }

    pub fn uncovered_counts(&self) -> Vec<usize> {
        self.bins.iter().map(|b| b.uncovered_ids.len()).collect()
    }

    pub fn polygon_count(&self) -> usize {
        self.bins.iter().map(BinResult::polygon_count).sum()
    }
}

/// Computes the rangeset of `binned` over `points` (index-aligned).
pub fn compute_rangeset(
    points: &PointSet2D,
    binned: &BinnedAttribute,
    spec: &AttributeSpec,
    epsilon: f64,
    mode: FilterMode,
) -> Result<Rangeset, PipelineError> {
    compute_rangeset_cancellable(points, binned, spec, epsilon, mode, &|| false)
}

/// Like [`compute_rangeset`], abandoning work once `cancelled` returns true.
pub fn compute_rangeset_cancellable(
    points: &PointSet2D,
    binned: &BinnedAttribute,
    spec: &AttributeSpec,
    epsilon: f64,
    mode: FilterMode,
    cancelled: &(dyn Fn() -> bool + Sync),
) -> Result<Rangeset, PipelineError> {
    if points.len() != binned.len() {
        return Err(PipelineError::LengthMismatch { points: points.len(), bins: binned.len() });
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(FiltrationError::NegativeEpsilon(epsilon).into());
    }
    let members = binned.all_members();
    let results: Vec<Result<BinResult, PipelineError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = members
            .into_iter()
            .enumerate()
            .map(|(bin, ids)| {
                scope.spawn(move || {
                    if cancelled() {
                        return Err(PipelineError::Cancelled);
                    }
                    let label = spec.labels.get(bin).cloned().unwrap_or_default();
                    let color = spec.colors.get(bin).cloned().unwrap_or_default();
                    Ok(compute_bin(points, bin, ids, label, color, epsilon, mode))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("bin worker panicked")).collect()
    });
    let bins = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    if cancelled() {
        return Err(PipelineError::Cancelled);
    }
    Ok(Rangeset { attribute: binned.attribute.clone(), epsilon, mode, bins })
}

fn compute_bin(
    points: &PointSet2D,
    bin_index: usize,
    member_ids: Vec<usize>,
    label: String,
    color: String,
    epsilon: f64,
    mode: FilterMode,
) -> BinResult {
    let mut result = BinResult {
        bin_index,
        label,
        color,
        member_ids,
        contours: Vec::new(),
        outlier_ids: Vec::new(),
        uncovered_ids: Vec::new(),
    };
    // too few members for a triangle: no geometry, every member an outlier
    if result.member_ids.len() < 3 {
        result.outlier_ids = result.member_ids.clone();
        return result;
    }
    let local = points.subset(&result.member_ids);
    let to_global = |v: usize| result.member_ids[v];

    let tri = match delaunay_triangulate(&local) {
        Ok(t) => t,
        Err(_) => {
            // collinear or coincident members: classify along the line only
            let (outliers, uncovered) = classify_chain(&local, epsilon, mode);
            result.outlier_ids = outliers.into_iter().map(to_global).collect();
            result.uncovered_ids = uncovered.into_iter().map(to_global).collect();
            return result;
        }
    };
    let fc = filter_complex(&tri, epsilon, mode).expect("epsilon validated above");
    let mut contours = extract_boundary(&fc, &tri).expect("complex derived from this triangulation");
    for c in &mut contours {
        for ring in &mut c.rings {
            ring.vertices.iter_mut().for_each(|v| *v = result.member_ids[*v]);
        }
    }
    result.contours = contours;
    result.outlier_ids = fc.outliers.iter().map(|&v| to_global(v)).collect();
    result.uncovered_ids = fc.uncovered.iter().map(|&v| to_global(v)).collect();
    result
}

/// Connectivity of points on a common line: consecutive points (in order
/// along the line) are joined when their distance is within `epsilon`.
/// Returns local ids of (singletons, members of longer chains).
fn classify_chain(points: &[Point2D], epsilon: f64, mode: FilterMode) -> (Vec<usize>, Vec<usize>) {
    let rep = dedup_points(points);
    let mut distinct: Vec<usize> = (0..points.len()).filter(|&i| rep[i] == i).collect();
    distinct.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    let mut chain_size = vec![1usize; points.len()];
    if mode == FilterMode::EdgeLength {
        let mut start = 0;
        for k in 1..=distinct.len() {
            let breaks = k == distinct.len()
                || points[distinct[k - 1]].distance(&points[distinct[k]]) > epsilon;
            if breaks {
                for &v in &distinct[start..k] {
                    chain_size[v] = k - start;
                }
                start = k;
            }
        }
    }
    // area mode keeps no edges without triangles, so every point is isolated
    let (mut outliers, mut uncovered) = (Vec::new(), Vec::new());
    for v in 0..points.len() {
        if chain_size[rep[v]] == 1 {
            outliers.push(v);
        } else {
            uncovered.push(v);
        }
    }
    (outliers, uncovered)
}

/// Default ε for a point set from its spanning-tree edge lengths.
pub fn suggest_epsilon(points: &PointSet2D) -> Result<f64, PipelineError> {
    suggest_epsilon_with(points, QuantileMethod::Linear)
}

pub fn suggest_epsilon_with(points: &PointSet2D, method: QuantileMethod) -> Result<f64, PipelineError> {
    let tri = delaunay_triangulate(points.as_slice())?;
    Ok(default_epsilon_with(&mst(&tri), method)?)
}
