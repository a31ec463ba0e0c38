//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's numerical routines.

#![allow(dead_code)]

use std::collections::HashSet;

use degnn::graph_core::{DenseMatrix, Graph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi rotations,
/// sorted descending.
pub fn sym_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Singular values (descending) from the eigenvalues `±σ` of the symmetric
/// embedding `[[0, M], [Mᵀ, 0]]`, which keeps small values accurate.
pub fn oracle_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let (r, c) = m.shape();
    let n = r + c;
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..r {
        for j in 0..c {
            a[i][r + j] = m[(i, j)];
            a[r + j][i] = m[(i, j)];
        }
    }
    sym_eigenvalues(a).into_iter().take(r.min(c)).map(f64::abs).collect()
}

pub fn max_sorted_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset sizes differ");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Plain triple-loop product.
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.cols(), b.rows());
    DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|t| a[(i, t)] * b[(t, j)]).sum())
}

/// `Y ← max(Z, aZ)` with `Z = Σₖ Aₖ Y Wₖ`, layer by layer.
pub fn oracle_forward(pieces: &[DenseMatrix], layers: &[Vec<DenseMatrix>], slope: f64, x: &DenseMatrix) -> DenseMatrix {
    let mut y = x.clone();
    for layer in layers {
        let mut z = DenseMatrix::zeros(y.rows(), layer[0].cols());
        for (a, w) in pieces.iter().zip(layer) {
            let term = matmul(&matmul(a, &y), w);
            for i in 0..z.rows() {
                for j in 0..z.cols() {
                    z[(i, j)] += term[(i, j)];
                }
            }
        }
        y = z.map(|v| if v >= 0.0 { v } else { slope * v });
    }
    y
}

/// Column-stacked vectorization.
pub fn oracle_vec(m: &DenseMatrix) -> Vec<f64> {
    (0..m.cols()).flat_map(|j| (0..m.rows()).map(move |i| m[(i, j)])).collect()
}

/// `log₂` of the number of distinct round-to-nearest `epsilon` grid points.
pub fn oracle_entropy(outputs: &[Vec<f64>], epsilon: f64) -> f64 {
    let distinct: HashSet<Vec<i64>> = outputs
        .iter()
        .map(|v| v.iter().map(|x| (x / epsilon).round() as i64).collect())
        .collect();
    (distinct.len() as f64).log2()
}

/// Uniform graph with `n` nodes and `m` distinct edges (capped at the
/// complete graph).
pub fn gnm_graph<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Graph {
    let m = m.min(n * (n - 1) / 2);
    let mut seen = HashSet::new();
    while seen.len() < m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            seen.insert((a.min(b), a.max(b)));
        }
    }
    let mut pairs: Vec<(usize, usize)> = seen.into_iter().collect();
    pairs.sort();
    Graph::unweighted(n, &pairs).unwrap()
}

/// Connected component count by union-find over `edges`.
pub fn oracle_components(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for (a, b) in edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Random partition with sizes differing by at most one.
pub fn oracle_random_partition<R: Rng + ?Sized>(n: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut part = vec![0; n];
    for (rank, u) in order.into_iter().enumerate() {
        part[u] = rank % parts;
    }
    part
}

pub fn oracle_cut(g: &Graph, part: &[usize]) -> f64 {
    g.edges().iter().filter(|e| part[e.u] != part[e.v]).map(|e| e.w).sum()
}
