//! Balance-constrained k-way Fiduccia–Mattheyses refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::wgraph::WorkGraph;

const EPS: f64 = 1e-12;
/// Consecutive non-improving moves tolerated inside one FM pass.
const MAX_STALL: usize = 64;
const MAX_PASSES: usize = 12;

pub(crate) struct PartState {
    pub part: Vec<usize>,
    pub load: Vec<usize>,
    pub count: Vec<usize>,
    pub max_load: usize,
}

impl PartState {
    pub fn new(g: &WorkGraph, part: Vec<usize>, k: usize, max_load: usize) -> Self {
        let mut load = vec![0; k];
        let mut count = vec![0; k];
        for (u, &p) in part.iter().enumerate() {
            load[p] += g.vwgt[u];
            count[p] += 1;
        }
        Self {
            part,
            load,
            count,
            max_load,
        }
    }

    fn apply(&mut self, g: &WorkGraph, u: usize, to: usize) {
        let from = self.part[u];
        self.load[from] -= g.vwgt[u];
        self.count[from] -= 1;
        self.load[to] += g.vwgt[u];
        self.count[to] += 1;
        self.part[u] = to;
    }

    fn feasible(&self, g: &WorkGraph, u: usize, to: usize) -> bool {
        self.count[self.part[u]] > 1 && self.load[to] + g.vwgt[u] <= self.max_load
    }
}

/// Connection weight from `u` to each part it touches, as `(part, weight)`
/// sorted by part id, plus the weight into its own part.
fn connections(g: &WorkGraph, part: &[usize], u: usize, buf: &mut Vec<(usize, f64)>) -> f64 {
    buf.clear();
    let own = part[u];
    let mut internal = 0.0;
    for (v, w) in g.neighbors(u) {
        let p = part[v];
        if p == own {
            internal += w;
        } else if let Some(slot) = buf.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += w;
        } else {
            buf.push((p, w));
        }
    }
    buf.sort_by_key(|&(p, _)| p);
    internal
}

/// Best feasible move of `u` into an adjacent part: `(gain, target)`,
/// smallest part id among equal gains.
fn best_move(g: &WorkGraph, st: &PartState, u: usize, buf: &mut Vec<(usize, f64)>) -> Option<(f64, usize)> {
    let internal = connections(g, &st.part, u, buf);
    let mut best: Option<(f64, usize)> = None;
    for &(p, w) in buf.iter() {
        if !st.feasible(g, u, p) {
            continue;
        }
        let gain = w - internal;
        if best.is_none_or(|(bg, _)| gain > bg) {
            best = Some((gain, p));
        }
    }
    best
}

#[derive(PartialEq)]
struct Candidate {
    gain: f64,
    node: usize,
    target: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Moves nodes out of overweight parts until every part fits, or no move
/// can make progress (possible on coarse levels with heavy nodes).
pub(crate) fn balance(g: &WorkGraph, st: &mut PartState) {
    let mut buf = Vec::new();
    loop {
        let Some(heavy) = (0..st.load.len())
            .filter(|&p| st.load[p] > st.max_load)
            .max_by(|&a, &b| st.load[a].cmp(&st.load[b]).then(b.cmp(&a)))
        else {
            return;
        };
        let mut best: Option<(f64, usize, usize)> = None;
        let lightest = (0..st.load.len())
            .min_by(|&a, &b| st.load[a].cmp(&st.load[b]).then(a.cmp(&b)))
            .unwrap();
        for u in 0..g.len() {
            if st.part[u] != heavy || st.count[heavy] <= 1 {
                continue;
            }
            let internal = connections(g, &st.part, u, &mut buf);
            let mut consider = |gain: f64, to: usize| {
                if st.load[to] + g.vwgt[u] > st.max_load && to != lightest {
                    return;
                }
                if st.load[to] + g.vwgt[u] >= st.load[heavy] {
                    return;
                }
                if best.is_none_or(|(bg, _, _)| gain > bg + EPS) {
                    best = Some((gain, u, to));
                }
            };
            for &(p, w) in buf.iter() {
                consider(w - internal, p);
            }
            if lightest != heavy && !buf.iter().any(|&(p, _)| p == lightest) {
                consider(-internal, lightest);
            }
        }
        match best {
            Some((_, u, to)) => st.apply(g, u, to),
            None => return,
        }
    }
}

/// FM passes with rollback to the best prefix, followed by greedy
/// positive-gain sweeps so the result admits no improving feasible move.
pub(crate) fn refine(g: &WorkGraph, st: &mut PartState) {
    let n = g.len();
    let mut buf = Vec::new();
    for _ in 0..MAX_PASSES {
        let mut heap = BinaryHeap::new();
        for u in 0..n {
            if let Some((gain, target)) = best_move(g, st, u, &mut buf) {
                heap.push(Candidate { gain, node: u, target });
            }
        }
        let mut locked = vec![false; n];
        let mut moves: Vec<(usize, usize)> = Vec::new();
        let mut total = 0.0;
        let mut best_total = 0.0;
        let mut best_len = 0;
        while let Some(c) = heap.pop() {
            if locked[c.node] {
                continue;
            }
            match best_move(g, st, c.node, &mut buf) {
                Some((gain, target)) if gain == c.gain && target == c.target => {}
                Some((gain, target)) => {
                    heap.push(Candidate { gain, node: c.node, target });
                    continue;
                }
                None => continue,
            }
            let from = st.part[c.node];
            st.apply(g, c.node, c.target);
            locked[c.node] = true;
            moves.push((c.node, from));
            total += c.gain;
            if total > best_total + EPS {
                best_total = total;
                best_len = moves.len();
            } else if moves.len() - best_len > MAX_STALL {
                break;
            }
            for (v, _) in g.neighbors(c.node) {
                if !locked[v] {
                    if let Some((gain, target)) = best_move(g, st, v, &mut buf) {
                        heap.push(Candidate { gain, node: v, target });
                    }
                }
            }
        }
        while moves.len() > best_len {
            let (u, from) = moves.pop().unwrap();
            st.apply(g, u, from);
        }
        if best_total <= EPS {
            break;
        }
    }
    greedy_sweeps(g, st);
}

fn greedy_sweeps(g: &WorkGraph, st: &mut PartState) {
    let mut buf = Vec::new();
    loop {
        let mut moved = false;
        for u in 0..g.len() {
            if let Some((gain, target)) = best_move(g, st, u, &mut buf) {
                if gain > EPS {
                    st.apply(g, u, target);
                    moved = true;
                }
            }
        }
        if !moved {
            return;
        }
    }
}

#[cfg(test)]
/// Largest gain of any feasible single-node move; non-positive means the
/// partition is a local minimum of the cut.
pub(crate) fn max_feasible_gain(g: &WorkGraph, st: &PartState) -> f64 {
    let mut buf = Vec::new();
    (0..g.len())
        .filter_map(|u| best_move(g, st, u, &mut buf).map(|(gain, _)| gain))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::Graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn refinement_ends_in_a_local_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let n = 60;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.1) {
                        edges.push((u, v, 1.0));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let nodes: Vec<usize> = (0..n).collect();
            let wg = WorkGraph::induced(&g, &nodes);
            let start: Vec<usize> = (0..n).map(|u| u % 3).collect();
            let before = wg.cut(&start);
            let mut st = PartState::new(&wg, start, 3, 24);
            refine(&wg, &mut st);
            assert!(wg.cut(&st.part) <= before);
            assert!(max_feasible_gain(&wg, &st) <= EPS);
            assert!(st.load.iter().all(|&l| l <= 24));
        }
    }
}
