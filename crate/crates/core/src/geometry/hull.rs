use super::predicates::{orient2d, strictly_between};
use super::{dedup_points, rotate_to_min, GeometryError, Point2D};

/// Counter-clockwise convex hull ring of point ids, starting at the smallest id.
///
/// Points lying exactly on a hull edge are part of the ring, matching the
/// outer boundary of the Delaunay triangulation. Duplicates are merged with
/// the same tolerance as [`super::delaunay_triangulate`].
pub fn convex_hull(points: &[Point2D]) -> Result<Vec<usize>, GeometryError> {
    if let Some(index) = points.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite { index });
    }
    let rep = dedup_points(points);
    let mut ids: Vec<usize> = (0..points.len()).filter(|&i| rep[i] == i).collect();
    if ids.len() < 3 {
        return Err(GeometryError::TooFewPoints(ids.len()));
    }
    ids.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });

    // Andrew's monotone chain, strict turns only
    let mut lower: Vec<usize> = Vec::new();
    for &i in &ids {
        while lower.len() >= 2
            && orient2d(points[lower[lower.len() - 2]], points[lower[lower.len() - 1]], points[i]) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in ids.iter().rev() {
        while upper.len() >= 2
            && orient2d(points[upper[upper.len() - 2]], points[upper[upper.len() - 1]], points[i]) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let corners: Vec<usize> = lower.into_iter().chain(upper).collect();
    if corners.len() < 3 {
        return Err(GeometryError::AllCollinear);
    }

    // re-insert points that sit exactly on a hull edge
    let mut ring = Vec::with_capacity(corners.len());
    for k in 0..corners.len() {
        let (a, b) = (corners[k], corners[(k + 1) % corners.len()]);
        let (pa, pb) = (points[a], points[b]);
        ring.push(a);
        let mut on_edge: Vec<usize> = ids
            .iter()
            .copied()
            .filter(|&i| i != a && i != b)
            .filter(|&i| orient2d(pa, pb, points[i]) == 0.0 && strictly_between(pa, pb, points[i]))
            .collect();
        on_edge.sort_by(|&i, &j| {
            let di = (points[i].x - pa.x).abs() + (points[i].y - pa.y).abs();
            let dj = (points[j].x - pa.x).abs() + (points[j].y - pa.y).abs();
            di.total_cmp(&dj)
        });
        ring.extend(on_edge);
    }
    rotate_to_min(&mut ring);
    Ok(ring)
}
