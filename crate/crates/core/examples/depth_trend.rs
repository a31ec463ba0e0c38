//! Test accuracy against depth for vanilla and decomposed GCN on a seeded
//! stochastic block model.
//!
//! cargo run --release --example depth_trend

use degnn::decompose::Strategy;
use degnn::train::{depth_sweep, generate_sbm, Backbone, ModelConfig, SbmSpec};

fn main() -> degnn::Result<()> {
    let data = generate_sbm(&SbmSpec::default(), 0)?;
    let ca = Strategy::ConnectivityAware { parts: 8, skeleton: true };
    let strategies = [Strategy::None, ca];
    let depths = [2, 4, 6, 8];
    let seeds = [0, 1, 2, 3, 4];
    let table = depth_sweep(&ModelConfig::default(), &data, &depths, &[Backbone::Gcn], &strategies, 3, &seeds)?;
    println!("{:<18} {:>5} {:>8} {:>8} {:>8}", "strategy", "depth", "median", "mean", "std");
    for a in &table.aggregates {
        println!("{:<18} {:>5} {:>8.3} {:>8.3} {:>8.3}", a.strategy, a.depth, a.median, a.mean, a.std);
    }
    Ok(())
}
