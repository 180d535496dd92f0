//! Boundary polygons of a filtered complex.
//!
//! Boundary edges (kept triangle on one side only) are oriented with the kept
//! region on their left and chained into closed rings. Where several boundary
//! edges leave the same vertex (two kept regions touching at a point), the
//! walk continues with the first outgoing boundary edge clockwise from the
//! reversed incoming edge, which hugs the kept wedge it came from. A ring
//! produced that way can still touch itself when a hole meets the outer
//! boundary at a vertex; such rings are cut at the repeated vertex, so every
//! ring is simple and the pinched hole comes out as a separate ring.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{FilteredComplex, FiltrationError};
use crate::geometry::{rotate_to_min, Point2D, Triangulation};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Outer,
    Hole,
}

/// A closed polygon; the closing edge from the last vertex back to the first
/// is implicit. Outer rings are counter-clockwise, holes clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    pub kind: RingKind,
    pub vertices: Vec<usize>,
    pub points: Vec<Point2D>,
}

impl Ring {
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Even-odd point-in-polygon test.
    pub fn contains(&self, p: Point2D) -> bool {
        point_in_ring(&self.points, p)
    }
}

/// One triangle-connected region: the first ring is the outer boundary, the
/// remaining rings are its holes.
///
/// On the wire this is `{"polygon": [ring, ...], "ids": [[id, ...], ...]}`
/// where each ring is a closed array of `[x, y]` (first point repeated last),
/// outer ring first, as in a GeoJSON polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ContourWire", try_from = "ContourWire")]
pub struct ContourGeometry {
    pub rings: Vec<Ring>,
}

impl ContourGeometry {
    pub fn outer(&self) -> &Ring {
        &self.rings[0]
    }

    pub fn holes(&self) -> &[Ring] {
        &self.rings[1..]
    }

    pub fn hole_count(&self) -> usize {
        self.rings.len() - 1
    }

    /// Outer area minus hole areas.
    pub fn area(&self) -> f64 {
        self.rings.iter().map(Ring::signed_area).sum()
    }

    pub fn contains(&self, p: Point2D) -> bool {
        self.outer().contains(p) && !self.holes().iter().any(|h| h.contains(p))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.rings.iter().flat_map(|r| r.vertices.iter().copied())
    }
}

#[derive(Serialize, Deserialize)]
struct ContourWire {
    polygon: Vec<Vec<Point2D>>,
    ids: Vec<Vec<usize>>,
}

impl From<ContourGeometry> for ContourWire {
    fn from(g: ContourGeometry) -> Self {
        let mut polygon = Vec::with_capacity(g.rings.len());
        let mut ids = Vec::with_capacity(g.rings.len());
        for ring in g.rings {
            let mut pts = ring.points;
            if let Some(&first) = pts.first() {
                pts.push(first);
            }
            polygon.push(pts);
            ids.push(ring.vertices);
        }
        Self { polygon, ids }
    }
}

impl TryFrom<ContourWire> for ContourGeometry {
    type Error = String;

    fn try_from(w: ContourWire) -> Result<Self, Self::Error> {
        if w.polygon.is_empty() || w.polygon.len() != w.ids.len() {
            return Err("polygon and ids must be non-empty and of equal length".into());
        }
        let rings = w
            .polygon
            .into_iter()
            .zip(w.ids)
            .enumerate()
            .map(|(i, (mut points, vertices))| {
                points.pop();
                if points.len() != vertices.len() {
                    return Err(format!("ring {i}: {} points for {} ids", points.len(), vertices.len()));
                }
                let kind = if i == 0 { RingKind::Outer } else { RingKind::Hole };
                Ok(Ring { kind, vertices, points })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rings })
    }
}

pub(crate) fn signed_area(points: &[Point2D]) -> f64 {
    let Some(&origin) = points.first() else {
        return 0.0;
    };
    let mut twice = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        twice += (a.x - origin.x) * (b.y - origin.y) - (b.x - origin.x) * (a.y - origin.y);
    }
    0.5 * twice
}

pub(crate) fn point_in_ring(ring: &[Point2D], p: Point2D) -> bool {
    let mut inside = false;
    let n = ring.len();
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Chains the boundary of the kept triangles into rings, one
/// [`ContourGeometry`] per outer ring. Each ring starts at its smallest vertex
/// id and contours are ordered by their outer ring's id sequence.
///
/// Edges kept without any incident kept triangle produce no geometry.
pub fn extract_boundary(
    fc: &FilteredComplex,
    t: &Triangulation,
) -> Result<Vec<ContourGeometry>, FiltrationError> {
    if fc.signature() != t.signature()
        || fc.kept_triangles.last().is_some_and(|&last| last >= t.triangles().len())
    {
        return Err(FiltrationError::InconsistentInput);
    }
    if fc.kept_triangles.is_empty() {
        return Ok(Vec::new());
    }
    let tris = t.triangles();
    let kept = fc.triangle_mask(tris.len());

    // triangle-connected components through shared kept-triangle edges
    let mut comps = UnionFind::new(tris.len());
    // directed boundary edge (from, to) -> owning kept triangle
    let mut boundary: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out_degree: HashMap<usize, usize> = HashMap::new();
    for &tr in &fc.kept_triangles {
        let tri = tris[tr];
        for (k, e) in t.triangle_edges(tr).into_iter().enumerate() {
            match t.edge_triangles(e).find(|&o| o != tr) {
                Some(other) if kept[other] => {
                    comps.union(tr, other);
                }
                _ => {
                    let (from, to) = (tri[k], tri[(k + 1) % 3]);
                    boundary.insert((from, to), tr);
                    *out_degree.entry(from).or_default() += 1;
                }
            }
        }
    }

    // only pinch vertices need the rotation order of the full triangulation
    let pinch: HashSet<usize> =
        out_degree.iter().filter(|&(_, &d)| d > 1).map(|(&v, _)| v).collect();
    let mut successor_single: HashMap<usize, usize> = HashMap::with_capacity(boundary.len());
    for &(from, to) in boundary.keys() {
        if !pinch.contains(&from) {
            successor_single.insert(from, to);
        }
    }
    let fans = VertexFans::around(t, &pinch);

    let next_edge = |from: usize, to: usize| -> (usize, usize) {
        if let Some(&w) = successor_single.get(&to) {
            return (to, w);
        }
        (to, fans.first_outgoing_cw(to, from, &boundary))
    };

    let mut starts: Vec<(usize, usize)> = boundary.keys().copied().collect();
    starts.sort_unstable();
    let mut visited: HashSet<(usize, usize)> = HashSet::with_capacity(boundary.len());
    // (component, ring vertex ids)
    let mut raw_rings: Vec<(usize, Vec<usize>)> = Vec::new();
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let comp = comps.find(boundary[&start]);
        let mut ring = Vec::new();
        let mut edge = start;
        loop {
            visited.insert(edge);
            ring.push(edge.0);
            edge = next_edge(edge.0, edge.1);
            if edge == start {
                break;
            }
            debug_assert!(!visited.contains(&edge), "boundary walk revisited an edge");
        }
        for mut piece in split_at_repeats(ring) {
            rotate_to_min(&mut piece);
            raw_rings.push((comp, piece));
        }
    }

    let make_ring = |vertices: Vec<usize>| -> Ring {
        let points: Vec<Point2D> = vertices.iter().map(|&v| t.point(v)).collect();
        let kind = if signed_area(&points) > 0.0 { RingKind::Outer } else { RingKind::Hole };
        Ring { kind, vertices, points }
    };

    let mut by_comp: BTreeMap<usize, Vec<Ring>> = BTreeMap::new();
    for (comp, vertices) in raw_rings {
        by_comp.entry(comp).or_default().push(make_ring(vertices));
    }

    let mut out = Vec::new();
    for (_, rings) in by_comp {
        let (outers, holes): (Vec<Ring>, Vec<Ring>) =
            rings.into_iter().partition(|r| r.kind == RingKind::Outer);
        let mut geoms: Vec<ContourGeometry> =
            outers.into_iter().map(|o| ContourGeometry { rings: vec![o] }).collect();
        for hole in holes {
            let target = if geoms.len() == 1 { 0 } else { nesting_parent(&geoms, &hole) };
            geoms[target].rings.push(hole);
        }
        for g in &mut geoms {
            g.rings[1..].sort_by(|a, b| a.vertices.cmp(&b.vertices));
        }
        out.extend(geoms);
    }
    // rings cut at a shared pinch vertex start at the same id, so compare whole rings
    out.sort_by(|a, b| a.outer().vertices.cmp(&b.outer().vertices));
    Ok(out)
}

/// Picks the outer ring that contains the hole, testing a hole vertex that is
/// not itself on that outer ring.
fn nesting_parent(geoms: &[ContourGeometry], hole: &Ring) -> usize {
    geoms
        .iter()
        .position(|g| {
            let outer = g.outer();
            hole.vertices
                .iter()
                .zip(&hole.points)
                .find(|(v, _)| !outer.vertices.contains(v))
                .is_some_and(|(_, &p)| outer.contains(p))
        })
        .unwrap_or(0)
}

/// Cuts a closed walk into loops that visit no vertex twice.
fn split_at_repeats(walk: Vec<usize>) -> Vec<Vec<usize>> {
    let mut pieces = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(walk.len());
    let mut pos: HashMap<usize, usize> = HashMap::with_capacity(walk.len());
    for v in walk {
        if let Some(&i) = pos.get(&v) {
            let piece: Vec<usize> = stack.drain(i..).collect();
            for u in &piece {
                pos.remove(u);
            }
            pieces.push(piece);
        }
        pos.insert(v, stack.len());
        stack.push(v);
    }
    pieces.push(stack);
    pieces
}

/// Clockwise neighbor order around selected vertices.
struct VertexFans {
    // (center, neighbor) -> next neighbor clockwise through a triangle
    next_cw: HashMap<(usize, usize), usize>,
    // for hull vertices: the last ray of the fan, reached after the exterior gap
    fan_end: HashMap<usize, usize>,
}

impl VertexFans {
    fn around(t: &Triangulation, centers: &HashSet<usize>) -> Self {
        let mut next_cw = HashMap::new();
        if !centers.is_empty() {
            for &[a, b, c] in t.triangles() {
                for (v, x, y) in [(a, b, c), (b, c, a), (c, a, b)] {
                    if centers.contains(&v) {
                        next_cw.insert((v, y), x);
                    }
                }
            }
        }
        let mut fan_end = HashMap::new();
        let targets: HashSet<(usize, usize)> = next_cw.iter().map(|(&(v, _), &x)| (v, x)).collect();
        for &(v, y) in next_cw.keys() {
            if !targets.contains(&(v, y)) {
                fan_end.insert(v, y);
            }
        }
        Self { next_cw, fan_end }
    }

    /// Rotates clockwise around `center` starting from the ray to `from` and
    /// returns the first neighbor `w` such that `center -> w` is a boundary
    /// edge. The kept wedge entered through `from -> center` lies clockwise of
    /// `from`, so this closes the tightest loop and keeps rings simple.
    fn first_outgoing_cw(
        &self,
        center: usize,
        from: usize,
        boundary: &HashMap<(usize, usize), usize>,
    ) -> usize {
        let mut ray = from;
        loop {
            ray = match self.next_cw.get(&(center, ray)) {
                Some(&x) => x,
                None => self.fan_end[&center],
            };
            if boundary.contains_key(&(center, ray)) {
                return ray;
            }
        }
    }
}
