//! Central-difference check of the hand-written backward pass for every
//! backbone and decomposition strategy.
//!
//! cargo run --release --example gradcheck

use degnn::decompose::Strategy;
use degnn::train::{finite_diff_gradcheck, generate_sbm, Backbone, ModelConfig, SbmSpec, TrainOptions};

fn main() -> degnn::Result<()> {
    let spec = SbmSpec {
        nodes: 80,
        ..SbmSpec::default()
    };
    let data = generate_sbm(&spec, 0)?;
    let strategies = [
        Strategy::None,
        Strategy::Random,
        Strategy::ConnectivityAware { parts: 4, skeleton: true },
    ];
    for backbone in Backbone::ALL {
        for s in strategies {
            let k = if s == Strategy::None { 1 } else { 2 };
            let cfg = ModelConfig::new(backbone, 3).with_uniform_k(k);
            let err = finite_diff_gradcheck(&cfg, &data, &TrainOptions::with_strategy(s), 1e-5, 50, 0)?;
            println!("{backbone:<9} {s:?}: max relative error {err:.2e}");
        }
    }
    Ok(())
}
