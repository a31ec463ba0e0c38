//! Realized singular values and quantized entropy against depth for a
//! decaying and a preserving stack.
//!
//! cargo run --release --example decay_curve

use degnn::graph_core::Graph;
use degnn::propagate::{decay_curve, write_curve_csv, StackSpec};

fn main() -> degnn::Result<()> {
    let g = Graph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])?;
    let depths: Vec<usize> = (1..=12).collect();
    println!("decay stack (sigma_A sigma_W = 0.5):");
    let rows = decay_curve(&StackSpec::decay(&g, 2, 0.5, 0.2)?, &depths, 16, 1e-6, 0)?;
    write_curve_csv(&rows, std::io::stdout())?;
    println!("\npreserve stack (a gamma_A gamma_W = 1.2):");
    let rows = decay_curve(&StackSpec::preserve(4, 2, 0.6, 1.2), &depths[..6], 64, 1e-6, 0)?;
    write_curve_csv(&rows, std::io::stdout())?;
    Ok(())
}
