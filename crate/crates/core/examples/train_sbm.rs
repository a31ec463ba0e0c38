//! Train a 4-layer GCN with and without connectivity-aware decomposition
//! on a stochastic block model.
//!
//! cargo run --release --example train_sbm

use degnn::decompose::Strategy;
use degnn::train::{generate_sbm, train, Backbone, ModelConfig, SbmSpec, TrainOptions};

fn main() -> degnn::Result<()> {
    let data = generate_sbm(&SbmSpec::default(), 0)?;
    println!("{} nodes, {} edges", data.node_count(), data.graph.edge_count());
    let vanilla = ModelConfig::new(Backbone::Gcn, 4);
    let r = train(&vanilla, &data, &TrainOptions::default(), 1)?;
    println!("gcn:   test {:.3} (best epoch {})", r.test_acc, r.best_epoch);
    let decomposed = vanilla.clone().with_uniform_k(3);
    let options = TrainOptions::with_strategy(Strategy::ConnectivityAware { parts: 8, skeleton: true });
    let r = train(&decomposed, &data, &options, 1)?;
    println!("degnn: test {:.3} (best epoch {})", r.test_acc, r.best_epoch);
    Ok(())
}
