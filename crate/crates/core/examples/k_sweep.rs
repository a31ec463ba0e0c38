//! Test accuracy as a function of the piece count K with an empty
//! skeleton, written as CSV to stdout.
//!
//! cargo run --release --example k_sweep

use degnn::train::{generate_sbm, k_sweep, ModelConfig, SbmSpec};

fn main() -> degnn::Result<()> {
    let data = generate_sbm(&SbmSpec::default(), 0)?;
    let ks: Vec<usize> = (1..=8).collect();
    let table = k_sweep(&ModelConfig::default(), &data, &ks, &[0, 1, 2], 8, false)?;
    table.write_csv(std::io::stdout())
}
