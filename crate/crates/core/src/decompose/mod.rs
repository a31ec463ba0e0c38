//! Edge decompositions of a graph into `K` pieces: random round-robin
//! dealing, the connectivity-aware construction that replicates a random
//! spanning forest into every piece, and the spectral split of a dense
//! matrix by singular directions.

mod forest;
mod io;
mod spectral_split;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph_core::{
    connected_components, normalized_adjacency_csr, CsrMatrix, DenseMatrix, Edge, Graph,
};
use crate::partition::{multilevel_partition, Partition, DEFAULT_MAX_IMBALANCE};
use crate::rng::{stream_rng, STREAM_FOREST, STREAM_SHUFFLE};

pub use io::{read_decomposition_dir, write_decomposition_dir};
pub use spectral_split::spectral_split;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Random,
    ConnectivityAware,
    Spectral,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Random => "random",
            Source::ConnectivityAware => "connectivity_aware",
            Source::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Source::Random),
            "connectivity_aware" | "ca" => Ok(Source::ConnectivityAware),
            "spectral" => Ok(Source::Spectral),
            other => Err(Error::domain(format!("unknown decomposition source {other:?}"))),
        }
    }
}

/// `K` pieces over one node set. Piece `k` is `residuals[k] ∪ skeleton`;
/// the residuals partition the non-skeleton edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    nodes: usize,
    residuals: Vec<Vec<Edge>>,
    skeleton: Vec<Edge>,
    source: Source,
    parts: Option<usize>,
    seed: u64,
}

/// How skeleton edges are weighted inside each piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SkeletonWeight {
    /// Every piece carries the skeleton at full weight.
    #[default]
    Verbatim,
    /// Skeleton weights are divided by `K`, so the pieces sum to `A`.
    Discount,
}

/// How piece matrices are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceNormalization {
    /// Plain weighted adjacency of each piece.
    Raw,
    /// Each piece normalized as a graph of its own.
    PerPiece { self_loops: bool },
    /// Entries of the whole graph's normalized adjacency, restricted to each
    /// piece; the self-loop diagonal is split evenly over the pieces.
    Global { self_loops: bool },
}

impl Default for PieceNormalization {
    fn default() -> Self {
        PieceNormalization::PerPiece { self_loops: true }
    }
}

impl Decomposition {
    pub(crate) fn from_parts(
        nodes: usize,
        residuals: Vec<Vec<Edge>>,
        skeleton: Vec<Edge>,
        source: Source,
        parts: Option<usize>,
        seed: u64,
    ) -> Self {
        Self {
            nodes,
            residuals,
            skeleton,
            source,
            parts,
            seed,
        }
    }

    /// The trivial decomposition: one piece holding every edge.
    pub fn identity(g: &Graph) -> Self {
        Self::from_parts(g.node_count(), vec![g.edges().to_vec()], Vec::new(), Source::Random, None, 0)
    }

    pub fn k(&self) -> usize {
        self.residuals.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn parts(&self) -> Option<usize> {
        self.parts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn skeleton(&self) -> &[Edge] {
        &self.skeleton
    }

    pub fn residual(&self, k: usize) -> &[Edge] {
        &self.residuals[k]
    }

    /// Piece `k` (residual plus skeleton) in edge-list order.
    pub fn piece(&self, k: usize) -> Vec<Edge> {
        self.piece_weighted(k, SkeletonWeight::Verbatim)
    }

    pub fn pieces(&self) -> Vec<Vec<Edge>> {
        (0..self.k()).map(|k| self.piece(k)).collect()
    }

    pub fn piece_weighted(&self, k: usize, weight: SkeletonWeight) -> Vec<Edge> {
        let scale = match weight {
            SkeletonWeight::Verbatim => 1.0,
            SkeletonWeight::Discount => 1.0 / self.k() as f64,
        };
        let mut edges = self.residuals[k].clone();
        edges.extend(self.skeleton.iter().map(|e| Edge { w: e.w * scale, ..*e }));
        edges.sort_by_key(Edge::key);
        edges
    }

    pub fn piece_graph(&self, k: usize, weight: SkeletonWeight) -> Graph {
        Graph::from_canonical(self.nodes, self.piece_weighted(k, weight))
    }

    /// Sparse operator per piece.
    pub fn piece_operators(
        &self,
        g: &Graph,
        norm: PieceNormalization,
        weight: SkeletonWeight,
    ) -> Result<Vec<CsrMatrix>> {
        if g.node_count() != self.nodes {
            return Err(Error::domain("decomposition and graph differ in node count"));
        }
        let n = self.nodes;
        match norm {
            PieceNormalization::Raw => Ok((0..self.k())
                .map(|k| {
                    let trips: Vec<_> = self
                        .piece_weighted(k, weight)
                        .iter()
                        .flat_map(|e| [(e.u, e.v, e.w), (e.v, e.u, e.w)])
                        .collect();
                    CsrMatrix::from_triplets(n, n, &trips)
                })
                .collect()),
            PieceNormalization::PerPiece { self_loops } => (0..self.k())
                .map(|k| normalized_adjacency_csr(&self.piece_graph(k, weight), self_loops))
                .collect(),
            PieceNormalization::Global { self_loops } => {
                let full = normalized_adjacency_csr(g, self_loops)?.to_dense();
                let kf = self.k() as f64;
                Ok((0..self.k())
                    .map(|k| {
                        let mut trips = Vec::new();
                        for e in &self.residuals[k] {
                            let v = full[(e.u, e.v)];
                            trips.push((e.u, e.v, v));
                            trips.push((e.v, e.u, v));
                        }
                        let scale = match weight {
                            SkeletonWeight::Verbatim => 1.0,
                            SkeletonWeight::Discount => 1.0 / kf,
                        };
                        for e in &self.skeleton {
                            let v = full[(e.u, e.v)] * scale;
                            trips.push((e.u, e.v, v));
                            trips.push((e.v, e.u, v));
                        }
                        if self_loops {
                            trips.extend((0..n).map(|i| (i, i, full[(i, i)] / kf)));
                        }
                        CsrMatrix::from_triplets(n, n, &trips)
                    })
                    .collect())
            }
        }
    }

    /// Dense version of [`Decomposition::piece_operators`].
    pub fn piece_matrices(
        &self,
        g: &Graph,
        norm: PieceNormalization,
        weight: SkeletonWeight,
    ) -> Result<Vec<DenseMatrix>> {
        Ok(self
            .piece_operators(g, norm, weight)?
            .iter()
            .map(CsrMatrix::to_dense)
            .collect())
    }
}

/// Deals edges to `k` buckets in order: edge `i` goes to bucket `i mod k`.
pub fn deal_round_robin(edges: impl IntoIterator<Item = Edge>, k: usize) -> Vec<Vec<Edge>> {
    let mut buckets = vec![Vec::new(); k];
    for (i, e) in edges.into_iter().enumerate() {
        buckets[i % k].push(e);
    }
    for b in &mut buckets {
        b.sort_by_key(Edge::key);
    }
    buckets
}

/// Shuffles the edges with `seed`, then deals them round-robin into `k`
/// disjoint pieces with no skeleton.
pub fn random_decompose(g: &Graph, k: usize, seed: u64) -> Result<Decomposition> {
    if k < 1 {
        return Err(Error::domain("piece count K must be at least 1"));
    }
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut stream_rng(seed, STREAM_SHUFFLE));
    Ok(Decomposition::from_parts(
        g.node_count(),
        deal_round_robin(edges, k),
        Vec::new(),
        Source::Random,
        None,
        seed,
    ))
}

/// `g` without its cut edges.
pub fn merged_graph(g: &Graph, part: &Partition) -> Graph {
    let kept = g
        .edges()
        .iter()
        .filter(|e| part.part(e.u) == part.part(e.v))
        .copied()
        .collect();
    g.with_edges(kept)
}

pub fn random_spanning_forest(g: &Graph, seed: u64) -> Vec<Edge> {
    forest::random_spanning_forest_with(g, &mut stream_rng(seed, STREAM_FOREST))
}

/// Deals the edges of `g` outside `skeleton` into `k` residual sets: nodes
/// are visited in id order, and each residual edge is dealt once, from its
/// lower endpoint, with one counter shared across all nodes.
pub fn deal_residual(g: &Graph, skeleton: &[Edge], k: usize) -> Vec<Vec<Edge>> {
    let in_skeleton: HashSet<(usize, usize)> = skeleton.iter().map(Edge::key).collect();
    let mut residuals = vec![Vec::new(); k];
    let mut counter = 0;
    for i in 0..g.node_count() {
        for &(j, w) in g.neighbors(i) {
            if j <= i || in_skeleton.contains(&(i, j)) {
                continue;
            }
            residuals[counter].push(Edge { u: i, v: j, w });
            counter = (counter + 1) % k;
        }
    }
    residuals
}

/// Options for [`connectivity_aware_decompose_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityAware {
    pub parts: usize,
    pub k: usize,
    pub seed: u64,
    /// When false the skeleton is empty and every edge is dealt.
    pub skeleton: bool,
    pub max_imbalance: f64,
}

impl ConnectivityAware {
    pub fn new(parts: usize, k: usize, seed: u64) -> Self {
        Self {
            parts,
            k,
            seed,
            skeleton: true,
            max_imbalance: DEFAULT_MAX_IMBALANCE,
        }
    }
}

/// Partition into `parts`, drop the cut edges, grow a random spanning
/// forest on what is left, deal the remaining edges of `g` into `k`
/// residuals and hand every piece its own copy of the forest.
pub fn connectivity_aware_decompose(g: &Graph, parts: usize, k: usize, seed: u64) -> Result<Decomposition> {
    connectivity_aware_decompose_with(g, &ConnectivityAware::new(parts, k, seed))
}

pub fn connectivity_aware_decompose_with(g: &Graph, opts: &ConnectivityAware) -> Result<Decomposition> {
    if opts.k < 1 {
        return Err(Error::domain("piece count K must be at least 1"));
    }
    let skeleton = if opts.skeleton {
        let part = multilevel_partition(g, opts.parts, opts.seed, opts.max_imbalance)?;
        let merged = merged_graph(g, &part);
        random_spanning_forest(&merged, opts.seed)
    } else {
        if opts.parts == 0 || opts.parts > g.node_count() {
            return Err(Error::domain(format!(
                "part count must lie in [1, {}], got {}",
                g.node_count(),
                opts.parts
            )));
        }
        Vec::new()
    };
    let residuals = deal_residual(g, &skeleton, opts.k);
    Ok(Decomposition::from_parts(
        g.node_count(),
        residuals,
        skeleton,
        Source::ConnectivityAware,
        Some(opts.parts),
        opts.seed,
    ))
}

/// Decomposition strategy for per-layer schedules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    None,
    Random,
    ConnectivityAware { parts: usize, skeleton: bool },
}

/// One decomposition per layer; layer `i` uses `seed + i`. A piece count of
/// one always yields the identity decomposition.
pub fn decompose_schedule(
    g: &Graph,
    schedule: &[usize],
    strategy: Strategy,
    seed: u64,
) -> Result<Vec<Decomposition>> {
    schedule
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let layer_seed = seed.wrapping_add(i as u64);
            match strategy {
                _ if k == 0 => Err(Error::domain(format!("layer {i}: piece count must be >= 1"))),
                Strategy::None if k > 1 => Err(Error::domain(format!(
                    "layer {i}: strategy none cannot produce {k} pieces"
                ))),
                _ if k == 1 => Ok(Decomposition::identity(g)),
                Strategy::None => unreachable!(),
                Strategy::Random => random_decompose(g, k, layer_seed),
                Strategy::ConnectivityAware { parts, skeleton } => connectivity_aware_decompose_with(
                    g,
                    &ConnectivityAware {
                        parts,
                        k,
                        seed: layer_seed,
                        skeleton,
                        max_imbalance: DEFAULT_MAX_IMBALANCE,
                    },
                ),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionStats {
    pub piece_edges: Vec<usize>,
    pub piece_components: Vec<usize>,
    pub skeleton_edges: usize,
    /// `Σ |piece| / |E|`; 1.0 for an edgeless graph.
    pub duplication_factor: f64,
    pub graph_components: usize,
}

pub fn decomposition_stats(g: &Graph, d: &Decomposition) -> DecompositionStats {
    let piece_edges: Vec<usize> = (0..d.k())
        .map(|k| d.residual(k).len() + d.skeleton().len())
        .collect();
    let piece_components = (0..d.k())
        .map(|k| connected_components(&d.piece_graph(k, SkeletonWeight::Verbatim)).count)
        .collect();
    let total: usize = piece_edges.iter().sum();
    let duplication_factor = if g.edge_count() == 0 {
        1.0
    } else {
        total as f64 / g.edge_count() as f64
    };
    DecompositionStats {
        piece_edges,
        piece_components,
        skeleton_edges: d.skeleton().len(),
        duplication_factor,
        graph_components: connected_components(g).count,
    }
}

/// Checks the structural contract of a decomposition against `g`: residuals
/// and skeleton are edges of `g`, the skeleton is disjoint from every
/// residual, and residuals cover `E(g) \ T` exactly once.
pub fn validate(g: &Graph, d: &Decomposition) -> Result<()> {
    let all: HashSet<(usize, usize)> = g.edges().iter().map(Edge::key).collect();
    let skel: HashSet<(usize, usize)> = d.skeleton().iter().map(Edge::key).collect();
    if !skel.is_subset(&all) {
        return Err(Error::domain("skeleton contains edges outside the graph"));
    }
    let mut seen = HashSet::new();
    for k in 0..d.k() {
        for e in d.residual(k) {
            if !all.contains(&e.key()) || skel.contains(&e.key()) || !seen.insert(e.key()) {
                return Err(Error::domain(format!(
                    "residual {k} edge {:?} is foreign, skeletal or repeated",
                    e.key()
                )));
            }
        }
    }
    if seen.len() + skel.len() != all.len() {
        return Err(Error::domain("pieces do not cover every edge"));
    }
    Ok(())
}
