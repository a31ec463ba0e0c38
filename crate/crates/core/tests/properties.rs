mod common;

use std::collections::HashSet;

use common::*;
use degnn::decompose::{connectivity_aware_decompose, random_decompose, validate};
use degnn::graph_core::{normalized_adjacency, DenseMatrix, Graph};
use degnn::partition::multilevel_partition;
use degnn::propagate::{endtoend_extremes, quantize, quantized_entropy, LayerStack};
use degnn::spectral::{gcn_regime, singular_values, svd, Regime};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-2.0f64..2.0, r * c).prop_map(move |v| DenseMatrix::new(r, c, v).unwrap())
    })
}

fn graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (2..=max_nodes).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            Graph::unweighted(n, &pairs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_matches_symmetric_eigen_oracle(m in matrix(6, 6)) {
        let lib = singular_values(&m).unwrap();
        let oracle = oracle_singular_values(&m);
        prop_assert!(max_sorted_diff(&lib, &oracle) < 1e-10);
        let full = svd(&m).unwrap();
        prop_assert!(full.reconstruct().max_abs_diff(&m) < 1e-10);
    }

    #[test]
    fn kron_spectrum_is_pairwise_products(a in matrix(3, 3), b in matrix(3, 3)) {
        let sa = oracle_singular_values(&a);
        let sb = oracle_singular_values(&b);
        let mut products: Vec<f64> = sa.iter().flat_map(|x| sb.iter().map(move |y| x * y)).collect();
        let mut got = singular_values(&a.kron(&b)).unwrap();
        // rectangular factors pad the product spectrum with zeros
        products.resize(got.len().max(products.len()), 0.0);
        got.resize(products.len(), 0.0);
        prop_assert!(max_sorted_diff(&products, &got) < 1e-10);
    }

    #[test]
    fn vec_unvec_inverse_and_column_major(m in matrix(5, 5)) {
        let v = m.vec();
        prop_assert_eq!(&v, &oracle_vec(&m));
        prop_assert_eq!(DenseMatrix::unvec(&v, m.rows(), m.cols()).unwrap(), m);
    }

    #[test]
    fn random_decomposition_partitions_edges(g in graph(30), k in 1usize..6, seed in any::<u64>()) {
        let d = random_decompose(&g, k, seed).unwrap();
        prop_assert!(validate(&g, &d).is_ok());
        let sizes: Vec<usize> = d.pieces().iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(random_decompose(&g, k, seed).unwrap(), d);
    }

    #[test]
    fn connectivity_aware_pieces_keep_connectivity(g in graph(60), k in 1usize..5, p in 1usize..5, seed in any::<u64>()) {
        let p = p.min(g.node_count());
        let d = connectivity_aware_decompose(&g, p, k, seed).unwrap();
        prop_assert!(validate(&g, &d).is_ok());
        let part = multilevel_partition(&g, p, seed, 1.3).unwrap();
        let merged = g.edges().iter().map(|e| e.key()).filter(|&(u, v)| part.part(u) == part.part(v));
        let cm = oracle_components(g.node_count(), merged);
        for piece in d.pieces() {
            prop_assert!(oracle_components(g.node_count(), piece.iter().map(|e| e.key())) <= cm);
        }
    }

    #[test]
    fn partition_respects_balance_cap(g in graph(80), p in 1usize..6, seed in any::<u64>()) {
        let p = p.min(g.node_count());
        let part = multilevel_partition(&g, p, seed, 1.3).unwrap();
        prop_assert_eq!(part.node_count(), g.node_count());
        let cap = degnn::partition::max_part_size(g.node_count(), p, 1.3);
        prop_assert!(part.sizes().into_iter().all(|s| s <= cap));
    }

    #[test]
    fn regimes_are_exclusive_and_match_thresholds(a in matrix(4, 4), w in matrix(3, 3), scale in 0.05f64..3.0, slope in 0.05f64..0.95) {
        let a = DenseMatrix::from_fn(4, 4, |i, j| if i < a.rows() && j < a.cols() { a[(i, j)] } else if i == j { 1.0 } else { 0.0 });
        let w = DenseMatrix::from_fn(3, 3, |i, j| if i < w.rows() && j < w.cols() { scale * w[(i, j)] } else if i == j { scale } else { 0.0 });
        let r = gcn_regime(&a, std::slice::from_ref(&w), slope).unwrap();
        let sa = oracle_singular_values(&a);
        let sw = oracle_singular_values(&w);
        let upper = sa[0] * sw[0];
        let lower = slope * sa[3] * sw[2];
        let expected = if upper < 1.0 {
            Regime::Decay
        } else if lower >= 1.0 {
            Regime::Preserve
        } else {
            Regime::Indeterminate
        };
        // values within rounding of a threshold may go either way
        if (upper - 1.0).abs() > 1e-9 && (lower - 1.0).abs() > 1e-9 {
            prop_assert_eq!(r.regime, expected);
        }
    }

    #[test]
    fn endtoend_spectrum_is_sandwiched_by_layer_certificates(
        g in graph(5), depth in 1usize..5, slope in 0.1f64..0.9, seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = g.node_count();
        let a = normalized_adjacency(&g, true).unwrap();
        let ws: Vec<DenseMatrix> = (0..depth).map(|_| DenseMatrix::random_uniform(2, 2, &mut rng)).collect();
        let r = gcn_regime(&a, &ws, slope).unwrap();
        let x = DenseMatrix::random_uniform(n, 2, &mut rng);
        let stack = LayerStack::gcn(a, ws, slope).unwrap();
        let (hi, lo) = endtoend_extremes(&stack, &x.vec()).unwrap();
        let up: f64 = r.layer_upper.iter().product();
        let down: f64 = r.layer_lower.iter().product();
        prop_assert!(hi <= up * (1.0 + 1e-9) + 1e-12);
        prop_assert!(lo >= down * (1.0 - 1e-9) - 1e-12);
    }

    #[test]
    fn entropy_never_exceeds_sample_count(samples in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 1..40), eps in 1e-3f64..1.0) {
        let h = quantized_entropy(&samples, eps);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (samples.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn entropy_does_not_grow_under_a_map_of_quantized_outputs(
        samples in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 1..40),
        m in matrix(2, 3),
        eps in 1e-2f64..0.5,
    ) {
        // a deterministic function of the quantized values carries no more
        // distinct outcomes than its argument
        let q: Vec<Vec<f64>> = samples.iter().map(|s| quantize(s, eps).into_iter().map(|v| v as f64).collect()).collect();
        let before = quantized_entropy(&q, 1.0);
        let mapped: Vec<Vec<f64>> = q
            .iter()
            .map(|v| (0..m.rows()).map(|i| (0..v.len().min(m.cols())).map(|j| m[(i, j)] * v[j]).sum()).collect())
            .collect();
        let distinct: HashSet<Vec<u64>> = mapped.iter().map(|v| v.iter().map(|x| x.to_bits()).collect()).collect();
        prop_assert!((distinct.len() as f64).log2() <= before + 1e-12);
    }
}
