//! Independent oracles shared by the integration tests. Nothing here calls
//! into the geometry code under test.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rangesets::geometry::Point2D;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2D> {
    (0..n).map(|_| Point2D::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

fn sign(v: &BigRational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact sign of the orientation determinant.
pub fn orient_sign(a: Point2D, b: Point2D, c: Point2D) -> i32 {
    let det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let perm = ((b.x - a.x) * (c.y - a.y)).abs() + ((b.y - a.y) * (c.x - a.x)).abs();
    // forward error bound of the f64 evaluation (generous constant)
    if det.abs() > 8.0 * f64::EPSILON * perm {
        return det.signum() as i32;
    }
    let (ax, ay, bx, by, cx, cy) = (exact(a.x), exact(a.y), exact(b.x), exact(b.y), exact(c.x), exact(c.y));
    sign(&((&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax)))
}

/// Exact sign of the in-circle determinant; positive when `d` lies strictly
/// inside the circle through the counter-clockwise triangle `a, b, c`.
pub fn incircle_sign(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> i32 {
    let (adx, ady, bdx, bdy, cdx, cdy) = (a.x - d.x, a.y - d.y, b.x - d.x, b.y - d.y, c.x - d.x, c.y - d.y);
    let (al, bl, cl) = (adx * adx + ady * ady, bdx * bdx + bdy * bdy, cdx * cdx + cdy * cdy);
    let det = al * (bdx * cdy - bdy * cdx) + bl * (cdx * ady - cdy * adx) + cl * (adx * bdy - ady * bdx);
    let perm = al * ((bdx * cdy).abs() + (bdy * cdx).abs())
        + bl * ((cdx * ady).abs() + (cdy * adx).abs())
        + cl * ((adx * bdy).abs() + (ady * bdx).abs());
    if det.abs() > 64.0 * f64::EPSILON * perm {
        return det.signum() as i32;
    }
    let d0 = (exact(d.x), exact(d.y));
    let rel = |p: Point2D| (exact(p.x) - &d0.0, exact(p.y) - &d0.1);
    let (ax, ay) = rel(a);
    let (bx, by) = rel(b);
    let (cx, cy) = rel(c);
    let lift = |x: &BigRational, y: &BigRational| x * x + y * y;
    let det = lift(&ax, &ay) * (&bx * &cy - &by * &cx) + lift(&bx, &by) * (&cx * &ay - &cy * &ax)
        + lift(&cx, &cy) * (&ax * &by - &ay * &bx);
    sign(&det)
}

/// Twice the exact signed area of a triangle, as a rational.
pub fn twice_area_exact(a: Point2D, b: Point2D, c: Point2D) -> BigRational {
    let (ax, ay, bx, by, cx, cy) = (exact(a.x), exact(a.y), exact(b.x), exact(b.y), exact(c.x), exact(c.y));
    (&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax)
}

/// Twice the exact signed area of a closed polygon.
pub fn twice_polygon_area_exact(ring: &[Point2D]) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(0));
    for i in 0..ring.len() {
        let (p, q) = (ring[i], ring[(i + 1) % ring.len()]);
        acc += exact(p.x) * exact(q.y) - exact(q.x) * exact(p.y);
    }
    acc
}

/// Gift-wrapping hull over exact orientation, counter-clockwise from the
/// smallest id, including points that lie on hull edges.
pub fn hull_oracle(p: &[Point2D]) -> Vec<usize> {
    let n = p.len();
    // a directed pair (i, j) is a hull edge when nothing lies strictly right
    // of it and no point lies strictly between i and j on the segment
    let mut next = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let all_left = (0..n).all(|k| k == i || k == j || orient_sign(p[i], p[j], p[k]) >= 0);
            if !all_left {
                continue;
            }
            let between = (0..n).any(|k| {
                k != i && k != j && orient_sign(p[i], p[j], p[k]) == 0 && strictly_inside_segment(p[i], p[j], p[k])
            });
            if !between {
                next[i] = j;
            }
        }
    }
    let start = (0..n).filter(|&i| next[i] != usize::MAX).min().expect("non-degenerate input");
    let mut ring = vec![start];
    let mut cur = next[start];
    while cur != start {
        ring.push(cur);
        cur = next[cur];
    }
    ring
}

fn dot(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    (b.x - a.x) * (c.x - a.x) + (b.y - a.y) * (c.y - a.y)
}

fn strictly_inside_segment(a: Point2D, b: Point2D, c: Point2D) -> bool {
    let t = dot(a, b, c);
    let len2 = dot(a, b, b);
    t > 0.0 && t < len2
}

pub fn dist(a: Point2D, b: Point2D) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Component sizes of the graph on `n` vertices joining every pair at
/// distance `<= eps` (complete-graph threshold), by breadth-first search.
pub fn threshold_components(p: &[Point2D], eps: f64) -> Vec<usize> {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = vec![s];
        let mut size = 0;
        while let Some(v) = queue.pop() {
            size += 1;
            for w in 0..n {
                if !seen[w] && dist(p[v], p[w]) <= eps {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// (multi-vertex components, singletons) of the complete-graph threshold.
pub fn threshold_counts(p: &[Point2D], eps: f64) -> (usize, usize) {
    let sizes = threshold_components(p, eps);
    (sizes.iter().filter(|&&s| s > 1).count(), sizes.iter().filter(|&&s| s == 1).count())
}

/// Euclidean MST of the complete graph by Prim's algorithm, as sorted
/// `(min, max)` id pairs.
pub fn complete_graph_mst(p: &[Point2D]) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, usize::MAX); n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    best[0] = (0.0, usize::MAX);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !in_tree[v]).min_by(|&a, &b| best[a].0.total_cmp(&best[b].0)).unwrap();
        in_tree[v] = true;
        if best[v].1 != usize::MAX {
            let u = best[v].1;
            edges.push((u.min(v), u.max(v)));
        }
        for w in 0..n {
            let d = dist(p[v], p[w]);
            if !in_tree[w] && d < best[w].0 {
                best[w] = (d, v);
            }
        }
    }
    edges.sort_unstable();
    edges
}
