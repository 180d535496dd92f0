//! ε-filtered sub-complexes of a Delaunay triangulation.
//!
//! Thresholding the Delaunay edges by length gives the nested family of
//! complexes whose outer boundaries are the α-hull style contours. This module
//! computes one member of that family ([`filter_complex`]), its boundary
//! polygons ([`extract_boundary`]) and the component counts over the whole
//! family ([`filtration_curve`]).

mod boundary;
mod curve;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Triangulation;
use crate::union_find::UnionFind;

pub use boundary::{extract_boundary, ContourGeometry, Ring, RingKind};
pub use curve::{filtration_curve, FiltrationCurve, MergeEvent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiltrationError {
    #[error("epsilon must be non-negative, got {0}")]
    NegativeEpsilon(f64),
    #[error("filtered complex was not derived from this triangulation")]
    InconsistentInput,
}

/// What the threshold is compared against.
///
/// `TriangleArea` thresholds are in squared embedding units and are much
/// harder to tune than edge lengths; it exists for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    #[default]
    EdgeLength,
    TriangleArea,
}

impl std::fmt::Display for FilterMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FilterMode::EdgeLength => "edge-length",
            FilterMode::TriangleArea => "triangle-area",
        })
    }
}

impl std::str::FromStr for FilterMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-length" => Ok(FilterMode::EdgeLength),
            "triangle-area" => Ok(FilterMode::TriangleArea),
            other => Err(format!("unknown filter mode `{other}`")),
        }
    }
}

/// One member of the filtration. Index sets are sorted ascending.
///
/// Vertex sets are in input-point ids; merged duplicates share the
/// classification of their representative.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    pub epsilon: f64,
    pub mode: FilterMode,
    pub kept_triangles: Vec<usize>,
    pub kept_edges: Vec<usize>,
    /// Vertices incident to at least one kept triangle.
    pub covered_vertices: Vec<usize>,
    /// Singleton components of the kept-edge graph.
    pub outliers: Vec<usize>,
    /// Vertices in a multi-vertex component that touch no kept triangle.
    pub uncovered: Vec<usize>,
    signature: u64,
}

impl FilteredComplex {
    pub fn triangle_mask(&self, triangle_count: usize) -> Vec<bool> {
        let mut mask = vec![false; triangle_count];
        for &t in &self.kept_triangles {
            mask[t] = true;
        }
        mask
    }

    pub(crate) fn signature(&self) -> u64 {
        self.signature
    }
}

/// Keeps the edges with length `<= epsilon` (inclusive) and the triangles whose
/// three edges are all kept; in area mode, triangles with area `<= epsilon`
/// and their bounding edges.
pub fn filter_complex(
    t: &Triangulation,
    epsilon: f64,
    mode: FilterMode,
) -> Result<FilteredComplex, FiltrationError> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(FiltrationError::NegativeEpsilon(epsilon));
    }
    let tri_count = t.triangles().len();
    let mut edge_kept = vec![false; t.edges().len()];
    let mut tri_kept = vec![false; tri_count];
    match mode {
        FilterMode::EdgeLength => {
            for (e, edge) in t.edges().iter().enumerate() {
                edge_kept[e] = edge.length <= epsilon;
            }
            for (tr, kept) in tri_kept.iter_mut().enumerate() {
                *kept = t.triangle_edges(tr).iter().all(|&e| edge_kept[e]);
            }
        }
        FilterMode::TriangleArea => {
            for (tr, kept) in tri_kept.iter_mut().enumerate() {
                if t.triangle_area(tr) <= epsilon {
                    *kept = true;
                    for e in t.triangle_edges(tr) {
                        edge_kept[e] = true;
                    }
                }
            }
        }
    }

    let n = t.point_count();
    let mut covered = vec![false; n];
    for (tr, &kept) in tri_kept.iter().enumerate() {
        if kept {
            for v in t.triangles()[tr] {
                covered[v] = true;
            }
        }
    }
    let mut uf = UnionFind::new(n);
    for (e, edge) in t.edges().iter().enumerate() {
        if edge_kept[e] {
            uf.union(edge.a, edge.b);
        }
    }

    let rep = t.representative();
    let mut covered_vertices = Vec::new();
    let mut outliers = Vec::new();
    let mut uncovered = Vec::new();
    for v in 0..n {
        let r = rep[v];
        if covered[r] {
            covered_vertices.push(v);
        } else if uf.component_size(r) == 1 {
            outliers.push(v);
        } else {
            uncovered.push(v);
        }
    }

    Ok(FilteredComplex {
        epsilon,
        mode,
        kept_triangles: (0..tri_count).filter(|&i| tri_kept[i]).collect(),
        kept_edges: (0..edge_kept.len()).filter(|&i| edge_kept[i]).collect(),
        covered_vertices,
        outliers,
        uncovered,
        signature: t.signature(),
    })
}
