//! A PReLU forward pass is a linear map once the activation signs are
//! fixed: compare a GraphCNN forward pass with its explicit mask product.
//!
//! cargo run --example linearization

use degnn::decompose::{random_decompose, PieceNormalization, SkeletonWeight};
use degnn::graph_core::{DenseMatrix, Graph};
use degnn::propagate::{forward, linearized_map, LayerStack};
use degnn::rng::stream_rng;

fn main() -> degnn::Result<()> {
    let mut rng = stream_rng(3, 0);
    let g = Graph::unweighted(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])?;
    let d = random_decompose(&g, 2, 3)?;
    let pieces = d.piece_matrices(&g, PieceNormalization::Global { self_loops: true }, SkeletonWeight::Verbatim)?;
    let layers = (0..3)
        .map(|_| (0..2).map(|_| DenseMatrix::random_uniform(2, 2, &mut rng)).collect())
        .collect();
    let stack = LayerStack::graphcnn(pieces, layers, 0.2)?;
    let x = DenseMatrix::random_uniform(5, 2, &mut rng);
    let y = forward(&stack, &x)?.pop().unwrap().vec();
    let lin = linearized_map(&stack, &x.vec())?;
    let diff = y.iter().zip(&lin.output).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("end-to-end matrix {:?}, max |forward - linearized| = {diff:e}", lin.matrix.shape());
    for (i, m) in lin.masks.iter().enumerate() {
        println!("layer {} mask: {:?}", i + 1, m.diag());
    }
    Ok(())
}
