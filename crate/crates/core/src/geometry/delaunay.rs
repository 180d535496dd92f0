//! Incremental Delaunay triangulation (Bowyer-Watson cavity insertion).
//!
//! The convex-hull exterior is covered by "ghost" triangles that share a
//! virtual vertex at infinity, so points outside the current hull are inserted
//! by the same cavity procedure as interior points. Points are inserted in
//! Hilbert-curve order and located by a visibility walk from the previously
//! created triangle, which gives near-linear behavior on spatially coherent
//! input.

use std::collections::HashMap;

use super::predicates::{incircle, orient2d, strictly_between};
use super::{dedup_points, ordered, GeometryError, Point2D, Triangulation};

const GHOST: usize = usize::MAX;

/// Triangulates `points`. Vertex ids in the result are indices into `points`.
///
/// Points closer than the dedup tolerance are merged onto the smallest id.
/// Cocircular ties are resolved towards the diagonal with the
/// lexicographically smallest vertex pair.
pub fn delaunay_triangulate(points: &[Point2D]) -> Result<Triangulation, GeometryError> {
    if let Some(index) = points.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite { index });
    }
    let representative = dedup_points(points);
    let unique: Vec<usize> = (0..points.len()).filter(|&i| representative[i] == i).collect();
    if unique.len() < 3 {
        return Err(GeometryError::TooFewPoints(unique.len()));
    }

    let order = hilbert_order(points, &unique);
    let mut mesh = Mesh::seed(points, &order)?;
    for &v in &order {
        if !mesh.seeded.contains(&v) {
            mesh.insert(v);
        }
    }
    mesh.resolve_cocircular_ties();

    let mut triangles: Vec<[usize; 3]> = mesh
        .live_triangles()
        .filter(|t| !t.contains(&GHOST))
        .map(|mut t| {
            let pos = (0..3).min_by_key(|&k| t[k]).unwrap_or(0);
            t.rotate_left(pos);
            t
        })
        .collect();
    triangles.sort_unstable();
    Ok(Triangulation::from_parts(points.to_vec(), representative, triangles))
}

struct Mesh<'a> {
    pts: &'a [Point2D],
    verts: Vec<[usize; 3]>,
    // nbrs[t][k] is the triangle across the edge opposite verts[t][k]
    nbrs: Vec<[usize; 3]>,
    alive: Vec<bool>,
    free: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    last: usize,
    seeded: [usize; 3],
    // scratch buffers reused across insertions
    cavity: Vec<usize>,
    stack: Vec<usize>,
}

impl<'a> Mesh<'a> {
    fn seed(pts: &'a [Point2D], order: &[usize]) -> Result<Self, GeometryError> {
        let a = order[0];
        let b = order[1];
        let c = order[2..]
            .iter()
            .copied()
            .find(|&c| orient2d(pts[a], pts[b], pts[c]) != 0.0)
            .ok_or(GeometryError::AllCollinear)?;
        let (b, c) = if orient2d(pts[a], pts[b], pts[c]) > 0.0 { (b, c) } else { (c, b) };

        let mut mesh = Mesh {
            pts,
            verts: Vec::new(),
            nbrs: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            stamp: Vec::new(),
            epoch: 0,
            last: 0,
            seeded: [a, b, c],
            cavity: Vec::new(),
            stack: Vec::new(),
        };
        let real = [a, b, c];
        let mut tris = vec![real];
        for k in 0..3 {
            let (x, y) = (real[(k + 1) % 3], real[(k + 2) % 3]);
            tris.push([y, x, GHOST]);
        }
        let mut by_edge: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for tri in tris {
            let t = mesh.alloc(tri);
            for k in 0..3 {
                by_edge.insert((tri[(k + 1) % 3], tri[(k + 2) % 3]), (t, k));
            }
        }
        for (&(u, v), &(t, k)) in &by_edge {
            let (s, _) = by_edge[&(v, u)];
            mesh.nbrs[t][k] = s;
        }
        mesh.last = 0;
        Ok(mesh)
    }

    fn alloc(&mut self, tri: [usize; 3]) -> usize {
        if let Some(t) = self.free.pop() {
            self.verts[t] = tri;
            self.nbrs[t] = [GHOST; 3];
            self.alive[t] = true;
            t
        } else {
            self.verts.push(tri);
            self.nbrs.push([GHOST; 3]);
            self.alive.push(true);
            self.stamp.push(0);
            self.verts.len() - 1
        }
    }

    fn live_triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.verts.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(t, _)| *t)
    }

    fn is_ghost(&self, t: usize) -> bool {
        self.verts[t].contains(&GHOST)
    }

    /// Whether inserting `p` destroys triangle `t`.
    fn in_conflict(&self, t: usize, p: Point2D) -> bool {
        let tri = self.verts[t];
        match tri.iter().position(|&v| v == GHOST) {
            None => incircle(self.pts[tri[0]], self.pts[tri[1]], self.pts[tri[2]], p) > 0.0,
            Some(g) => {
                let a = self.pts[tri[(g + 1) % 3]];
                let b = self.pts[tri[(g + 2) % 3]];
                let o = orient2d(a, b, p);
                o > 0.0 || (o == 0.0 && strictly_between(a, b, p))
            }
        }
    }

    /// Visibility walk from the last created triangle. Returns a triangle in
    /// conflict with `p`: either a real triangle whose closure contains `p`,
    /// or a ghost whose hull edge `p` sees strictly.
    fn locate(&self, p: Point2D) -> usize {
        let mut t = self.last;
        let mut steps = 0usize;
        'walk: loop {
            if self.is_ghost(t) {
                return t;
            }
            let tri = self.verts[t];
            // rotate the starting edge to avoid pathological revisits
            for j in 0..3 {
                let k = (j + steps) % 3;
                let u = self.pts[tri[(k + 1) % 3]];
                let v = self.pts[tri[(k + 2) % 3]];
                if orient2d(u, v, p) < 0.0 {
                    t = self.nbrs[t][k];
                    steps += 1;
                    continue 'walk;
                }
            }
            return t;
        }
    }

    fn insert(&mut self, v: usize) {
        let p = self.pts[v];
        let start = self.locate(p);
        debug_assert!(self.in_conflict(start, p));

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;

        let mut cavity = std::mem::take(&mut self.cavity);
        let mut stack = std::mem::take(&mut self.stack);
        cavity.clear();
        stack.clear();
        stack.push(start);
        self.stamp[start] = epoch;
        while let Some(t) = stack.pop() {
            cavity.push(t);
            for k in 0..3 {
                let n = self.nbrs[t][k];
                if self.stamp[n] != epoch && self.in_conflict(n, p) {
                    self.stamp[n] = epoch;
                    stack.push(n);
                }
            }
        }

        // boundary edges of the cavity, oriented as in the destroyed triangle
        let mut boundary: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(cavity.len() + 2);
        for &t in &cavity {
            for k in 0..3 {
                let n = self.nbrs[t][k];
                if self.stamp[n] != epoch {
                    let tri = self.verts[t];
                    // resolve the back-pointer slot now: freed ids get reused below
                    let slot = (0..3).find(|&j| self.nbrs[n][j] == t).unwrap_or(0);
                    boundary.push((tri[(k + 1) % 3], tri[(k + 2) % 3], n, slot));
                }
            }
        }
        for &t in &cavity {
            self.alive[t] = false;
            self.free.push(t);
        }

        let mut by_start: HashMap<usize, usize> = HashMap::with_capacity(boundary.len());
        let mut by_end: HashMap<usize, usize> = HashMap::with_capacity(boundary.len());
        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, outer, slot) in &boundary {
            let t = self.alloc([a, b, v]);
            self.nbrs[t][2] = outer;
            self.nbrs[outer][slot] = t;
            by_start.insert(a, t);
            by_end.insert(b, t);
            created.push(t);
        }
        for &t in &created {
            let [a, b, _] = self.verts[t];
            // edge opposite a is (b, v): shared with the triangle starting at b
            self.nbrs[t][0] = by_start[&b];
            // edge opposite b is (v, a): shared with the triangle ending at a
            self.nbrs[t][1] = by_end[&a];
        }
        if let Some(&t) = created.iter().find(|&&t| !self.is_ghost(t)) {
            self.last = t;
        }

        self.cavity = cavity;
        self.stack = stack;
    }

    /// Flips cocircular diagonals towards the lexicographically smallest vertex
    /// pair. Every flip replaces an edge with a strictly smaller one, so the
    /// sorted edge list decreases and the loop terminates.
    fn resolve_cocircular_ties(&mut self) {
        loop {
            let mut flipped = false;
            for t in 0..self.verts.len() {
                if !self.alive[t] || self.is_ghost(t) {
                    continue;
                }
                for k in 0..3 {
                    let s = self.nbrs[t][k];
                    if self.is_ghost(s) {
                        continue;
                    }
                    let tri = self.verts[t];
                    let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    let j = match (0..3).find(|&j| self.nbrs[s][j] == t) {
                        Some(j) => j,
                        None => continue,
                    };
                    let d = self.verts[s][j];
                    let [pa, pb, pc, pd] = [a, b, c, d].map(|i| self.pts[i]);
                    if incircle(pa, pb, pc, pd) != 0.0 {
                        continue;
                    }
                    if ordered(a, d) < ordered(b, c) {
                        self.flip(t, k, s, j);
                        flipped = true;
                        break;
                    }
                }
            }
            if !flipped {
                break;
            }
        }
    }

    /// Replaces the shared edge (b, c) of t = (a, b, c) and s = (d, c, b) with (a, d).
    fn flip(&mut self, t: usize, k: usize, s: usize, j: usize) {
        let tri = self.verts[t];
        let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
        let sv = self.verts[s];
        let d = sv[j];
        debug_assert_eq!((sv[(j + 1) % 3], sv[(j + 2) % 3]), (c, b));

        // outer neighbours
        let t_ab = self.nbrs[t][(k + 2) % 3]; // opposite c: edge (a, b)
        let t_ca = self.nbrs[t][(k + 1) % 3]; // opposite b: edge (c, a)
        let s_dc = self.nbrs[s][(j + 2) % 3]; // opposite b in s: edge (d, c)
        let s_bd = self.nbrs[s][(j + 1) % 3]; // opposite c in s: edge (b, d)

        // t becomes (a, b, d), s becomes (a, d, c)
        self.verts[t] = [a, b, d];
        self.nbrs[t] = [s_bd, s, t_ab];
        self.verts[s] = [a, d, c];
        self.nbrs[s] = [s_dc, t_ca, t];
        self.relink(s_bd, s, t);
        self.relink(t_ca, t, s);
    }

    fn relink(&mut self, tri: usize, from: usize, to: usize) {
        if let Some(slot) = self.nbrs[tri].iter_mut().find(|x| **x == from) {
            *slot = to;
        }
    }
}

/// Ids of `unique` sorted along a Hilbert curve over the bounding box.
fn hilbert_order(points: &[Point2D], unique: &[usize]) -> Vec<usize> {
    const ORDER: u32 = 16;
    let side = (1u32 << ORDER) - 1;
    let (mut minx, mut miny, mut maxx, mut maxy) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &i in unique {
        let p = points[i];
        minx = minx.min(p.x);
        miny = miny.min(p.y);
        maxx = maxx.max(p.x);
        maxy = maxy.max(p.y);
    }
    let span = (maxx - minx).max(maxy - miny).max(f64::MIN_POSITIVE);
    let mut keyed: Vec<(u64, usize)> = unique
        .iter()
        .map(|&i| {
            let p = points[i];
            let x = (((p.x - minx) / span) * f64::from(side)) as u32;
            let y = (((p.y - miny) / span) * f64::from(side)) as u32;
            (hilbert_index(x, y, ORDER), i)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn hilbert_index(mut x: u32, mut y: u32, order: u32) -> u64 {
    let n = 1u32 << order;
    let mut d: u64 = 0;
    let mut s = n >> 1;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}
