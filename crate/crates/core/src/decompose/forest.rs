use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph_core::{Edge, Graph};

/// Disjoint-set forest with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `a` and `b` were already connected.
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
        true
    }
}

/// Randomized Kruskal: scan the edges in a uniformly shuffled order and keep
/// every edge that joins two trees. The result spans each component of `g`,
/// has `n - #components` edges and is returned in edge-list order.
pub fn random_spanning_forest_with<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<Edge> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut uf = UnionFind::new(g.node_count());
    let mut keep = vec![false; g.edge_count()];
    for idx in order {
        let e = g.edges()[idx];
        if uf.union(e.u, e.v) {
            keep[idx] = true;
        }
    }
    g.edges()
        .iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(*e))
        .collect()
}
