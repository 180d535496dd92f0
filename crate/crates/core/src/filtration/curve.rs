use serde::{Deserialize, Serialize};

use crate::geometry::Triangulation;
use crate::union_find::UnionFind;

/// Two components joined at `epsilon`. Components are labeled by their
/// smallest vertex id just before the merge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub epsilon: f64,
    pub components: (usize, usize),
}

/// Component counts of the ε-thresholded Delaunay graph as a step function.
///
/// `multi_components[i]` and `singletons[i]` hold for
/// `thresholds[i] <= ε < thresholds[i + 1]`. Counts are over distinct
/// vertices (merged duplicates count once).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationCurve {
    pub vertex_count: usize,
    pub thresholds: Vec<f64>,
    pub multi_components: Vec<usize>,
    pub singletons: Vec<usize>,
    pub merge_events: Vec<MergeEvent>,
}

impl FiltrationCurve {
    /// `(multi_components, singletons)` of the graph keeping edges `<= epsilon`.
    pub fn counts_at(&self, epsilon: f64) -> (usize, usize) {
        let i = self.thresholds.partition_point(|&t| t <= epsilon);
        if i == 0 {
            (0, self.vertex_count)
        } else {
            (self.multi_components[i - 1], self.singletons[i - 1])
        }
    }

    /// Total number of components (Betti-0) at `epsilon`.
    pub fn components_at(&self, epsilon: f64) -> usize {
        let (m, s) = self.counts_at(epsilon);
        m + s
    }
}

/// Kruskal sweep over the Delaunay edges in ascending length, recording the
/// component counts after each distinct length.
pub fn filtration_curve(t: &Triangulation) -> FiltrationCurve {
    let mut order: Vec<usize> = (0..t.edges().len()).collect();
    let edges = t.edges();
    order.sort_by(|&i, &j| {
        edges[i].length.total_cmp(&edges[j].length).then((edges[i].a, edges[i].b).cmp(&(edges[j].a, edges[j].b)))
    });

    let vertex_count = t.vertex_count();
    let mut uf = UnionFind::new(t.point_count());
    let mut singletons = vertex_count;
    let mut multi = 0usize;

    let mut curve = FiltrationCurve {
        vertex_count,
        thresholds: Vec::new(),
        multi_components: Vec::new(),
        singletons: Vec::new(),
        merge_events: Vec::new(),
    };
    let mut k = 0;
    while k < order.len() {
        let length = edges[order[k]].length;
        while k < order.len() && edges[order[k]].length == length {
            let e = edges[order[k]];
            let (sa, sb) = (uf.component_size(e.a), uf.component_size(e.b));
            let (la, lb) = (uf.label(e.a), uf.label(e.b));
            if uf.union(e.a, e.b) {
                singletons -= usize::from(sa == 1) + usize::from(sb == 1);
                multi = multi + 1 - usize::from(sa >= 2) - usize::from(sb >= 2);
                curve.merge_events.push(MergeEvent { epsilon: length, components: (la.min(lb), la.max(lb)) });
            }
            k += 1;
        }
        curve.thresholds.push(length);
        curve.multi_components.push(multi);
        curve.singletons.push(singletons);
    }
    curve
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{delaunay_triangulate, Point2D};

    #[test]
    fn kite_curve() {
        let t = delaunay_triangulate(&[
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            Point2D::new(0.5, 1.0),
            Point2D::new(0.5, -1.0),
        ])
        .unwrap();
        let c = filtration_curve(&t);
        assert_eq!(c.thresholds.len(), 2);
        assert_eq!(c.thresholds[0], 1.0);
        assert!((c.thresholds[1] - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!((c.multi_components[0], c.singletons[0]), (1, 2));
        assert_eq!((c.multi_components[1], c.singletons[1]), (1, 0));
        assert_eq!(c.counts_at(0.5), (0, 4));
        assert_eq!(c.counts_at(1.0), (1, 2));
        assert_eq!(c.counts_at(t.max_edge_length()), (1, 0));
        // 0-1 merge, then two wings join
        assert_eq!(c.merge_events.len(), 3);
        assert_eq!(c.merge_events[0].components, (0, 1));
    }

    #[test]
    fn two_clusters_merge_late() {
        let mut p = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                p.push(Point2D::new(f64::from(i) * 0.1, f64::from(j) * 0.1));
                p.push(Point2D::new(5.0 + f64::from(i) * 0.1, f64::from(j) * 0.1));
            }
        }
        let t = delaunay_triangulate(&p).unwrap();
        let c = filtration_curve(&t);
        assert_eq!(c.counts_at(0.1000001), (2, 0));
        assert_eq!(c.counts_at(4.79), (2, 0));
        assert_eq!(c.counts_at(4.81), (1, 0));
    }
}
