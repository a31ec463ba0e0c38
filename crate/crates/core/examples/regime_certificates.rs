//! Decay / preserve / indeterminate classification for GCN and GraphCNN
//! stacks.
//!
//! cargo run --example regime_certificates

use degnn::decompose::spectral_split;
use degnn::graph_core::{normalized_adjacency, DenseMatrix, Graph};
use degnn::propagate::{random_orthogonal, rescale_to_norm};
use degnn::rng::stream_rng;
use degnn::spectral::{gcn_regime, graphcnn_regime, singular_values};

fn main() -> degnn::Result<()> {
    let mut rng = stream_rng(1, 0);
    let g = Graph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])?;
    let a = normalized_adjacency(&g, true)?;
    let half: Vec<DenseMatrix> = (0..3).map(|_| random_orthogonal(2, &mut rng).scale(0.5)).collect();
    println!("normalized adjacency, sigma_W = 0.5:\n{}", gcn_regime(&a, &half, 0.2)?.to_kv());
    let two_i = DenseMatrix::identity(4).scale(2.0);
    println!("A = 2I, W = I, a = 0.6:\n{}", gcn_regime(&two_i, &[DenseMatrix::identity(2)], 0.6)?.to_kv());

    // one singular direction per piece, each weight scaled so that
    // λₖ(A) · σ(Wₖ) = 0.9
    let m = DenseMatrix::random_uniform(3, 3, &mut rng);
    let pieces = spectral_split(&m, 3)?;
    let lambdas = singular_values(&m)?;
    let layer = lambdas
        .iter()
        .map(|l| rescale_to_norm(&DenseMatrix::random_uniform(2, 2, &mut rng), 0.9 / l))
        .collect::<degnn::Result<Vec<_>>>()?;
    println!("spectral split, per-piece gains 0.9:\n{}", graphcnn_regime(&pieces, &[layer], 0.2)?.to_kv());
    Ok(())
}
