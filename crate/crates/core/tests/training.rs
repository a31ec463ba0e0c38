use degnn::decompose::Strategy;
use degnn::train::{generate_sbm, train, Backbone, ModelConfig, SbmSpec, TrainOptions};

#[test]
fn every_backbone_fits_noiseless_block_features() {
    let spec = SbmSpec {
        nodes: 120,
        noise: 0.0,
        ..SbmSpec::default()
    };
    let data = generate_sbm(&spec, 2).unwrap();
    for backbone in Backbone::ALL {
        for (strategy, k) in [(Strategy::None, 1), (Strategy::ConnectivityAware { parts: 4, skeleton: true }, 2)] {
            let cfg = ModelConfig {
                max_epochs: 200,
                patience: 200,
                ..ModelConfig::new(backbone, 3).with_uniform_k(k)
            };
            let r = train(&cfg, &data, &TrainOptions::with_strategy(strategy), 0).unwrap();
            let best = r.history.iter().map(|e| e.train_acc).fold(0.0, f64::max);
            assert!(r.history.len() <= 200);
            assert!(best >= 0.99, "{backbone} {strategy:?}: train accuracy {best}");
        }
    }
}

#[test]
fn identical_seeds_give_identical_histories() {
    let data = generate_sbm(&SbmSpec { nodes: 100, ..SbmSpec::default() }, 4).unwrap();
    let cfg = ModelConfig::new(Backbone::JkNet, 4).with_uniform_k(2);
    let opts = TrainOptions::with_strategy(Strategy::Random);
    assert_eq!(train(&cfg, &data, &opts, 9).unwrap(), train(&cfg, &data, &opts, 9).unwrap());
}
