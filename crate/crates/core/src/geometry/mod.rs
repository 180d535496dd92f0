//! Planar geometric kernel: points, Delaunay triangulation, convex hull.
//!
//! Everything downstream (filtration, spanning trees, contours) consumes the
//! [`Triangulation`] built here. Orientation and in-circle decisions go through
//! adaptive-precision predicates, so near-degenerate embeddings triangulate
//! consistently.

mod delaunay;
mod hull;
pub mod predicates;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use delaunay::delaunay_triangulate;
pub use hull::convex_hull;

/// Relative tolerance (times the bounding-box diagonal) below which two
/// points are treated as the same vertex.
pub const DEDUP_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("need at least 3 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("all points are collinear; no triangle exists")]
    AllCollinear,
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
}

/// A position in the embedding plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point2D {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2D> for [f64; 2] {
    fn from(p: Point2D) -> Self {
        [p.x, p.y]
    }
}

impl From<(f64, f64)> for Point2D {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Immutable embedded coordinates, index-aligned with dataset rows.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointSet2D(Vec<Point2D>);

impl PointSet2D {
    pub fn new(points: Vec<Point2D>) -> Result<Self, GeometryError> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        Ok(Self(points))
    }

    pub fn from_xy(xy: &[(f64, f64)]) -> Result<Self, GeometryError> {
        Self::new(xy.iter().copied().map(Point2D::from).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Point2D] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<&Point2D> {
        self.0.get(i)
    }

    /// Points at the given row indices, in that order.
    pub fn subset(&self, ids: &[usize]) -> Vec<Point2D> {
        ids.iter().map(|&i| self.0[i]).collect()
    }
}

impl std::ops::Index<usize> for PointSet2D {
    type Output = Point2D;

    fn index(&self, i: usize) -> &Point2D {
        &self.0[i]
    }
}

/// Unordered Delaunay edge with its cached Euclidean length. `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// Delaunay triangulation of a planar point set.
///
/// Vertex ids are indices into the input slice. Input points that were merged
/// as duplicates keep their id but map to a representative vertex through
/// [`Triangulation::representative`]; only representatives appear in
/// triangles and edges.
#[derive(Debug, Clone)]
pub struct Triangulation {
    points: Vec<Point2D>,
    representative: Vec<usize>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    // edge k of triangle t joins triangles[t][k] and triangles[t][(k + 1) % 3]
    triangle_edges: Vec<[usize; 3]>,
    edge_triangles: Vec<[Option<usize>; 2]>,
    signature: u64,
}

impl Triangulation {
    pub(crate) fn from_parts(
        points: Vec<Point2D>,
        representative: Vec<usize>,
        triangles: Vec<[usize; 3]>,
    ) -> Self {
        let mut index: HashMap<(usize, usize), usize> = HashMap::with_capacity(triangles.len() * 2);
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(triangles.len() * 2);
        for tri in &triangles {
            for k in 0..3 {
                let (u, v) = ordered(tri[k], tri[(k + 1) % 3]);
                index.entry((u, v)).or_insert_with(|| {
                    pairs.push((u, v));
                    pairs.len() - 1
                });
            }
        }
        pairs.sort_unstable();
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let edges: Vec<Edge> = pairs
            .iter()
            .map(|&(a, b)| Edge { a, b, length: points[a].distance(&points[b]) })
            .collect();

        let mut edge_triangles = vec![[None, None]; edges.len()];
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut te = [0usize; 3];
            for k in 0..3 {
                let e = index[&ordered(tri[k], tri[(k + 1) % 3])];
                te[k] = e;
                let slot = &mut edge_triangles[e];
                if slot[0].is_none() {
                    slot[0] = Some(t);
                } else {
                    debug_assert!(slot[1].is_none(), "edge shared by more than two triangles");
                    slot[1] = Some(t);
                }
            }
            triangle_edges.push(te);
        }

        let signature = signature_of(points.len(), &triangles);
        Self { points, representative, triangles, edges, triangle_edges, edge_triangles, signature }
    }

    /// All input points, including merged duplicates.
    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn point(&self, v: usize) -> Point2D {
        self.points[v]
    }

    /// Number of input points (including merged duplicates).
    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    /// Representative vertex for each input point.
    pub fn representative(&self) -> &[usize] {
        &self.representative
    }

    pub fn is_representative(&self, v: usize) -> bool {
        self.representative[v] == v
    }

    /// Number of distinct vertices after duplicate merging.
    pub fn vertex_count(&self) -> usize {
        self.representative.iter().enumerate().filter(|&(i, &r)| i == r).count()
    }

    /// Counter-clockwise triangles, each rotated so its smallest id comes first,
    /// sorted lexicographically.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge ids of triangle `t`; entry `k` joins vertex `k` and `k + 1`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Triangles incident to edge `e` (one for hull edges, two otherwise).
    pub fn edge_triangles(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.edge_triangles[e].iter().flatten().copied()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_triangles[e][1].is_none()
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = ordered(a, b);
        self.edges.binary_search_by(|e| (e.a, e.b).cmp(&key)).ok()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.points[a], self.points[b], self.points[c]);
        0.5 * ((pb.x - pa.x) * (pc.y - pa.y) - (pc.x - pa.x) * (pb.y - pa.y))
    }

    /// Longest Delaunay edge (ε_max): at this threshold every triangle is kept.
    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    /// The outer boundary chained into a counter-clockwise ring starting at
    /// its smallest vertex id.
    pub fn boundary_ring(&self) -> Vec<usize> {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                if self.is_boundary_edge(self.triangle_edges[t][k]) {
                    next.insert(tri[k], tri[(k + 1) % 3]);
                }
            }
        }
        let Some(&start) = next.keys().min() else {
            return Vec::new();
        };
        let mut ring = vec![start];
        let mut cur = next[&start];
        while cur != start {
            ring.push(cur);
            cur = next[&cur];
        }
        ring
    }

    /// Fingerprint used to check that derived structures belong to this triangulation.
    pub fn signature(&self) -> u64 {
        self.signature
    }
}

/// Euclidean length of every unique edge.
pub fn edge_lengths(t: &Triangulation) -> Vec<(Edge, f64)> {
    t.edges().iter().map(|e| (*e, e.length)).collect()
}

pub(crate) fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Rotates a ring so that its smallest element is first, preserving order.
pub(crate) fn rotate_to_min(ring: &mut [usize]) {
    if let Some((pos, _)) = ring.iter().enumerate().min_by_key(|&(_, v)| *v) {
        ring.rotate_left(pos);
    }
}

fn signature_of(n: usize, triangles: &[[usize; 3]]) -> u64 {
    // FNV-1a over the vertex count and triangle list
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        for byte in x.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(n as u64);
    for tri in triangles {
        for &v in tri {
            feed(v as u64);
        }
    }
    h
}

/// Merges points closer than `DEDUP_RELATIVE_TOLERANCE` times the bounding-box
/// diagonal. Returns the representative (smallest id) of each point.
pub(crate) fn dedup_points(points: &[Point2D]) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let (mut minx, mut miny, mut maxx, mut maxy) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in points {
        minx = minx.min(p.x);
        miny = miny.min(p.y);
        maxx = maxx.max(p.x);
        maxy = maxy.max(p.y);
    }
    let diag = (maxx - minx).hypot(maxy - miny);
    let tol = DEDUP_RELATIVE_TOLERANCE * diag;
    let mut rep: Vec<usize> = (0..n).collect();
    if diag == 0.0 {
        rep.iter_mut().for_each(|r| *r = 0);
        return rep;
    }

    let cell_of = |p: &Point2D| -> (i64, i64) {
        (((p.x - minx) / tol).floor() as i64, ((p.y - miny) / tol).floor() as i64)
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::with_capacity(n);
    for (i, p) in points.iter().enumerate() {
        let (cx, cy) = cell_of(p);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in bucket {
                        if points[j].distance(p) < tol {
                            found = Some(j);
                            break 'search;
                        }
                    }
                }
            }
        }
        match found {
            Some(j) => rep[i] = rep[j],
            None => grid.entry((cx, cy)).or_default().push(i),
        }
    }
    rep
}
