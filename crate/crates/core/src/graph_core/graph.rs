use std::collections::HashSet;

use super::matrix::DenseMatrix;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Undirected weighted edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    /// Canonicalizes endpoint order.
    pub fn new(a: usize, b: usize, w: f64) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u, v, w }
    }

    pub fn key(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// Simple undirected graph with positive edge weights and an adjacency-list
/// view kept in sync with the sorted edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
    features: Option<DenseMatrix>,
}

impl Graph {
    /// Builds a graph from `(a, b, weight)` triples. Endpoints may come in
    /// either order; repeated pairs keep the first weight seen.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("graph must have at least one node"));
        }
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::domain(format!("self-loop at node {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) has invalid weight {w}"
                )));
            }
            let e = Edge::new(a, b, w);
            if seen.insert(e.key()) {
                list.push(e);
            }
        }
        Ok(Self::from_canonical(n, list))
    }

    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(a, b)| (a, b, 1.0)))
    }

    /// Caller guarantees the edges are valid and duplicate free.
    pub(crate) fn from_canonical(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(Edge::key);
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        Self {
            n,
            edges,
            adj,
            features: None,
        }
    }

    /// Same node set, subset of edges (weights taken from `edges`).
    pub fn with_edges(&self, edges: Vec<Edge>) -> Graph {
        let mut g = Graph::from_canonical(self.n, edges);
        g.features = self.features.clone();
        g
    }

    pub fn with_features(mut self, features: DenseMatrix) -> Result<Self> {
        if features.rows() != self.n {
            return Err(Error::domain(format!(
                "feature matrix has {} rows for {} nodes",
                features.rows(),
                self.n
            )));
        }
        self.features = Some(features);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic `(u, v)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn features(&self) -> Option<&DenseMatrix> {
        self.features.as_ref()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search_by_key(&b, |&(j, _)| j).is_ok()
    }
}

/// Dense symmetric adjacency matrix.
pub fn adjacency(g: &Graph) -> DenseMatrix {
    let n = g.node_count();
    let mut a = DenseMatrix::zeros(n, n);
    for e in g.edges() {
        a[(e.u, e.v)] = e.w;
        a[(e.v, e.u)] = e.w;
    }
    a
}

fn degrees(g: &Graph, add_self_loops: bool) -> Result<Vec<f64>> {
    (0..g.node_count())
        .map(|i| {
            let d = g.weighted_degree(i) + if add_self_loops { 1.0 } else { 0.0 };
            if d > 0.0 {
                Ok(d)
            } else {
                Err(Error::DegenerateDegree { node: i })
            }
        })
        .collect()
}

/// `D^{-1/2} Â D^{-1/2}` with `Â = A + I` when `add_self_loops`, else `Â = A`.
pub fn normalized_adjacency(g: &Graph, add_self_loops: bool) -> Result<DenseMatrix> {
    let deg = degrees(g, add_self_loops)?;
    let n = g.node_count();
    let mut a = DenseMatrix::zeros(n, n);
    for e in g.edges() {
        let v = e.w / (deg[e.u] * deg[e.v]).sqrt();
        a[(e.u, e.v)] = v;
        a[(e.v, e.u)] = v;
    }
    if add_self_loops {
        for (i, d) in deg.iter().enumerate() {
            a[(i, i)] = 1.0 / d;
        }
    }
    Ok(a)
}

/// Sparse version of [`normalized_adjacency`].
pub fn normalized_adjacency_csr(g: &Graph, add_self_loops: bool) -> Result<CsrMatrix> {
    let deg = degrees(g, add_self_loops)?;
    let n = g.node_count();
    let mut trips = Vec::with_capacity(2 * g.edge_count() + n);
    for e in g.edges() {
        let v = e.w / (deg[e.u] * deg[e.v]).sqrt();
        trips.push((e.u, e.v, v));
        trips.push((e.v, e.u, v));
    }
    if add_self_loops {
        trips.extend(deg.iter().enumerate().map(|(i, d)| (i, i, 1.0 / d)));
    }
    Ok(CsrMatrix::from_triplets(n, n, &trips))
}

/// Per-node component labels, numbered in order of each component's
/// smallest node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Node lists per component, each sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}

pub fn connected_components(g: &Graph) -> Components {
    const UNSEEN: usize = usize::MAX;
    let n = g.node_count();
    let mut labels = vec![UNSEEN; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if labels[start] != UNSEEN {
            continue;
        }
        labels[start] = count;
        stack.push(start);
        while let Some(i) = stack.pop() {
            for &(j, _) in g.neighbors(i) {
                if labels[j] == UNSEEN {
                    labels[j] = count;
                    stack.push(j);
                }
            }
        }
        count += 1;
    }
    Components { labels, count }
}
