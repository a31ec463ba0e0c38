//! Greedy graph growing: `k` regions grown simultaneously from spread-out
//! seeds, always extending the lightest region by its most strongly
//! connected frontier node.

use std::collections::{BinaryHeap, VecDeque};

use rand::Rng;

use super::wgraph::WorkGraph;

const UNASSIGNED: usize = usize::MAX;

/// Hop distance from the nearest of `sources`; unreachable nodes get
/// `usize::MAX`.
fn bfs_distances(g: &WorkGraph, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// First seed uniformly at random, each further seed the node farthest
/// from all previous ones (smallest id on ties).
fn pick_seeds<R: Rng + ?Sized>(g: &WorkGraph, k: usize, rng: &mut R) -> Vec<usize> {
    let mut seeds = vec![rng.random_range(0..g.len())];
    while seeds.len() < k {
        let dist = bfs_distances(g, &seeds);
        let next = (0..g.len())
            .filter(|u| !seeds.contains(u))
            .max_by(|&a, &b| dist[a].cmp(&dist[b]).then(b.cmp(&a)))
            .expect("k <= node count");
        seeds.push(next);
    }
    seeds
}

#[derive(PartialEq)]
struct Frontier {
    conn: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.conn
            .total_cmp(&other.conn)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn grow<R: Rng + ?Sized>(g: &WorkGraph, k: usize, rng: &mut R) -> Vec<usize> {
    let n = g.len();
    assert!(k >= 1 && k <= n);
    let mut part = vec![UNASSIGNED; n];
    if k == 1 {
        return vec![0; n];
    }
    let mut load = vec![0usize; k];
    let mut conn = vec![vec![0.0f64; n]; k];
    let mut frontier: Vec<BinaryHeap<Frontier>> = (0..k).map(|_| BinaryHeap::new()).collect();
    let mut remaining = n;

    let assign = |u: usize,
                      p: usize,
                      part: &mut Vec<usize>,
                      load: &mut Vec<usize>,
                      conn: &mut Vec<Vec<f64>>,
                      frontier: &mut Vec<BinaryHeap<Frontier>>| {
        part[u] = p;
        load[p] += g.vwgt[u];
        for (v, w) in g.neighbors(u) {
            if part[v] == UNASSIGNED {
                conn[p][v] += w;
                frontier[p].push(Frontier { conn: conn[p][v], node: v });
            }
        }
    };

    for (p, s) in pick_seeds(g, k, rng).into_iter().enumerate() {
        assign(s, p, &mut part, &mut load, &mut conn, &mut frontier);
        remaining -= 1;
    }

    let mut next_free = 0;
    while remaining > 0 {
        let p = (0..k)
            .min_by(|&a, &b| load[a].cmp(&load[b]).then(a.cmp(&b)))
            .unwrap();
        let mut chosen = None;
        while let Some(f) = frontier[p].pop() {
            if part[f.node] == UNASSIGNED && f.conn == conn[p][f.node] {
                chosen = Some(f.node);
                break;
            }
        }
        let u = match chosen {
            Some(u) => u,
            None => {
                while part[next_free] != UNASSIGNED {
                    next_free += 1;
                }
                next_free
            }
        };
        assign(u, p, &mut part, &mut load, &mut conn, &mut frontier);
        remaining -= 1;
    }
    part
}
