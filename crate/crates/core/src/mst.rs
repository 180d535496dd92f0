//! Euclidean minimum spanning tree over the Delaunay graph and the default
//! filter threshold derived from its edge-length distribution.
//!
//! The Euclidean MST of a planar point set is a subgraph of its Delaunay
//! triangulation, so Kruskal over the O(n) Delaunay edges yields the exact
//! MST without touching the complete graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Triangulation;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MstError {
    #[error("a spanning tree over a single vertex has no edges")]
    SinglePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub edges: Vec<TreeEdge>,
    pub total_length: f64,
}

impl SpanningTree {
    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn max_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }
}

/// How quantiles are read off the sorted edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantileMethod {
    /// Linear interpolation between order statistics at rank `p * (n - 1)`.
    #[default]
    Linear,
    Lower,
    Higher,
    Nearest,
    Midpoint,
}

/// Quantile `p` in `[0, 1]` of ascending-sorted, non-empty `sorted`.
pub fn quantile(sorted: &[f64], p: f64, method: QuantileMethod) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    match method {
        QuantileMethod::Linear => sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]),
        QuantileMethod::Lower => sorted[lo],
        QuantileMethod::Higher => sorted[hi],
        QuantileMethod::Nearest => sorted[h.round_ties_even() as usize],
        QuantileMethod::Midpoint => 0.5 * (sorted[lo] + sorted[hi]),
    }
}

/// Kruskal over Delaunay edges; equal lengths are taken in vertex-pair order.
pub fn mst(t: &Triangulation) -> SpanningTree {
    let edges = t.edges();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&i, &j| {
        edges[i]
            .length
            .total_cmp(&edges[j].length)
            .then((edges[i].a, edges[i].b).cmp(&(edges[j].a, edges[j].b)))
    });
    let mut uf = UnionFind::new(t.point_count());
    let mut tree = Vec::with_capacity(t.vertex_count().saturating_sub(1));
    for i in order {
        let e = edges[i];
        if uf.union(e.a, e.b) {
            tree.push(TreeEdge { a: e.a, b: e.b, length: e.length });
        }
    }
    let total_length = tree.iter().map(|e| e.length).sum();
    SpanningTree { edges: tree, total_length }
}

/// Tukey-fence threshold over the tree's edge lengths: `q75 + 1.5 * (q75 - q25)`.
pub fn default_epsilon(st: &SpanningTree) -> Result<f64, MstError> {
    default_epsilon_with(st, QuantileMethod::Linear)
}

pub fn default_epsilon_with(st: &SpanningTree, method: QuantileMethod) -> Result<f64, MstError> {
    if st.edges.is_empty() {
        return Err(MstError::SinglePoint);
    }
    let mut lengths = st.lengths();
    lengths.sort_by(f64::total_cmp);
    let q25 = quantile(&lengths, 0.25, method);
    let q75 = quantile(&lengths, 0.75, method);
    Ok(q75 + 1.5 * (q75 - q25))
}
