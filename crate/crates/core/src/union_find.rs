//! Disjoint-set forest with union by size and path compression.
//!
//! Shared by the Kruskal spanning tree and the filtration sweep. Component
//! sizes are tracked so the sweep can tell singletons from multi-vertex
//! components without a second pass.

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    // smallest vertex id in each component, kept at the root
    min_id: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n], min_id: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the components of `a` and `b`. Returns `false` if they were
    /// already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.min_id[ra] = self.min_id[ra].min(self.min_id[rb]);
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    /// Stable component label: the smallest vertex id in the component.
    pub fn label(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.min_id[r]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_tracks_size() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(3, 4));
        assert!(uf.union(1, 4));
        assert!(!uf.union(3, 1));
        assert!(uf.connected(1, 3));
        assert!(!uf.connected(0, 3));
        assert_eq!(uf.component_size(4), 3);
        assert_eq!(uf.label(4), 1);
        assert_eq!(uf.label(0), 0);
    }
}
