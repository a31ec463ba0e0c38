use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph_core::Graph;

/// CSR graph with integer node weights, the form every level of the
/// multilevel scheme works on.
#[derive(Debug, Clone)]
pub(crate) struct WorkGraph {
    pub vwgt: Vec<usize>,
    pub xadj: Vec<usize>,
    pub adjncy: Vec<usize>,
    pub adjwgt: Vec<f64>,
}

impl WorkGraph {
    /// Induced subgraph on `nodes` (sorted ascending), relabeled `0..len`.
    pub fn induced(g: &Graph, nodes: &[usize]) -> Self {
        let mut local = vec![usize::MAX; g.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            local[u] = i;
        }
        let mut xadj = Vec::with_capacity(nodes.len() + 1);
        let mut adjncy = Vec::new();
        let mut adjwgt = Vec::new();
        xadj.push(0);
        for &u in nodes {
            for &(v, w) in g.neighbors(u) {
                if local[v] != usize::MAX {
                    adjncy.push(local[v]);
                    adjwgt.push(w);
                }
            }
            xadj.push(adjncy.len());
        }
        Self {
            vwgt: vec![1; nodes.len()],
            xadj,
            adjncy,
            adjwgt,
        }
    }

    pub fn len(&self) -> usize {
        self.vwgt.len()
    }

    #[cfg(test)]
    pub fn total_weight(&self) -> usize {
        self.vwgt.iter().sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.xadj[u]..self.xadj[u + 1];
        self.adjncy[span.clone()]
            .iter()
            .copied()
            .zip(self.adjwgt[span].iter().copied())
    }

    pub fn cut(&self, part: &[usize]) -> f64 {
        let mut cut = 0.0;
        for u in 0..self.len() {
            for (v, w) in self.neighbors(u) {
                if u < v && part[u] != part[v] {
                    cut += w;
                }
            }
        }
        cut
    }
}

/// One coarsening step by heavy-edge matching. Nodes are visited in a
/// seeded random order; each unmatched node pairs with the unmatched
/// neighbor of heaviest connecting edge (smallest id on ties), provided the
/// merged weight stays under `max_vwgt`. Returns the coarse graph and the
/// fine-to-coarse map.
pub(crate) fn coarsen<R: Rng + ?Sized>(
    g: &WorkGraph,
    max_vwgt: usize,
    rng: &mut R,
) -> (WorkGraph, Vec<usize>) {
    let n = g.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    const UNMATCHED: usize = usize::MAX;
    let mut mate = vec![UNMATCHED; n];
    for &u in &order {
        if mate[u] != UNMATCHED {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (v, w) in g.neighbors(u) {
            if v == u || mate[v] != UNMATCHED || g.vwgt[u] + g.vwgt[v] > max_vwgt {
                continue;
            }
            best = match best {
                Some((bv, bw)) if bw > w || (bw == w && bv < v) => Some((bv, bw)),
                _ => Some((v, w)),
            };
        }
        match best {
            Some((v, _)) => {
                mate[u] = v;
                mate[v] = u;
            }
            None => mate[u] = u,
        }
    }

    // Coarse ids follow the smaller fine id of each pair.
    let mut cmap = vec![UNMATCHED; n];
    let mut cn = 0;
    for u in 0..n {
        if cmap[u] == UNMATCHED {
            cmap[u] = cn;
            cmap[mate[u]] = cn;
            cn += 1;
        }
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::with_capacity(2); cn];
    for u in 0..n {
        members[cmap[u]].push(u);
    }
    let mut vwgt = vec![0; cn];
    let mut xadj = Vec::with_capacity(cn + 1);
    let mut adjncy = Vec::new();
    let mut adjwgt = Vec::new();
    let mut slot = vec![usize::MAX; cn];
    xadj.push(0);
    for (c, group) in members.iter().enumerate() {
        let start = adjncy.len();
        for &u in group {
            vwgt[c] += g.vwgt[u];
            for (v, w) in g.neighbors(u) {
                let cv = cmap[v];
                if cv == c {
                    continue;
                }
                if slot[cv] == usize::MAX {
                    slot[cv] = adjncy.len();
                    adjncy.push(cv);
                    adjwgt.push(w);
                } else {
                    adjwgt[slot[cv]] += w;
                }
            }
        }
        for &cv in &adjncy[start..] {
            slot[cv] = usize::MAX;
        }
        xadj.push(adjncy.len());
    }
    (
        WorkGraph {
            vwgt,
            xadj,
            adjncy,
            adjwgt,
        },
        cmap,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coarsening_preserves_total_weights() {
        let g = Graph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
            .unwrap();
        let nodes: Vec<usize> = (0..6).collect();
        let wg = WorkGraph::induced(&g, &nodes);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (cg, cmap) = coarsen(&wg, 10, &mut rng);
        assert!(cg.len() < wg.len());
        assert_eq!(cg.total_weight(), 6);
        // cut of any coarse partition equals cut of its projection
        let coarse_part: Vec<usize> = (0..cg.len()).map(|c| c % 2).collect();
        let fine_part: Vec<usize> = cmap.iter().map(|&c| coarse_part[c]).collect();
        assert_eq!(cg.cut(&coarse_part), wg.cut(&fine_part));
    }
}
