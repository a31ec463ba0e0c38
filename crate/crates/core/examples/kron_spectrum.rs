//! Spectral split of a matrix into one-singular-value pieces and the closed
//! form for the singular values of `Σ Wₖ ⊗ Aₖ`.
//!
//! cargo run --example kron_spectrum

use degnn::decompose::spectral_split;
use degnn::graph_core::DenseMatrix;
use degnn::rng::stream_rng;
use degnn::spectral::{kron_sum_spectrum, multiset_max_diff, singular_values};

fn main() -> degnn::Result<()> {
    let mut rng = stream_rng(5, 0);
    let a = DenseMatrix::random_uniform(4, 4, &mut rng);
    let pieces = spectral_split(&a, 4)?;
    let ws: Vec<DenseMatrix> = (0..4).map(|_| DenseMatrix::random_uniform(2, 2, &mut rng)).collect();
    let closed = kron_sum_spectrum(&pieces, &ws)?;
    let mut sum = DenseMatrix::zeros(8, 8);
    for (w, p) in ws.iter().zip(&pieces) {
        sum = &sum + &w.kron(p);
    }
    let brute = singular_values(&sum)?;
    println!("singular values of A: {:?}", singular_values(&a)?);
    println!("closed form: {closed:?}");
    println!("brute force: {brute:?}");
    println!("max difference: {:e}", multiset_max_diff(&closed, &brute));
    Ok(())
}
