use std::io::Write;

use rand::Rng;

use super::config::ModelConfig;
use super::model::{accuracy, check_data, softmax_xent, Model, TrainOptions};
use super::sbm::Dataset;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, STREAM_PROBE};

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub train_acc: f64,
    pub val_acc: f64,
    pub test_acc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    pub history: Vec<EpochStats>,
    /// Epoch with the highest validation accuracy (earliest on ties).
    pub best_epoch: usize,
    pub best_val_acc: f64,
    /// Test accuracy at `best_epoch`.
    pub test_acc: f64,
    pub stopped_early: bool,
    pub seed: u64,
}

impl TrainResult {
    pub fn write_history_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| Error::Format(format!("csv write failed: {e}"));
        w.write_record(["epoch", "train_loss", "val_loss", "train_acc", "val_acc", "test_acc"])
            .map_err(to_err)?;
        for e in &self.history {
            w.write_record([
                e.epoch.to_string(),
                e.train_loss.to_string(),
                e.val_loss.to_string(),
                e.train_acc.to_string(),
                e.val_acc.to_string(),
                e.test_acc.to_string(),
            ])
            .map_err(to_err)?;
        }
        w.flush().map_err(|e| Error::Format(format!("csv flush failed: {e}")))
    }
}

/// Full-batch gradient descent on the training split. Each epoch records
/// metrics for the current weights and then takes one step; training stops
/// once validation accuracy has not improved for `patience` epochs.
pub fn train(config: &ModelConfig, data: &Dataset, options: &TrainOptions, seed: u64) -> Result<TrainResult> {
    check_data(data)?;
    let mut model = Model::init(config, data, options, seed)?;
    train_model(&mut model, config, data, seed)
}

pub(crate) fn train_model(model: &mut Model, config: &ModelConfig, data: &Dataset, seed: u64) -> Result<TrainResult> {
    let mut history = Vec::new();
    let mut best: Option<(usize, f64, f64)> = None;
    let mut stopped_early = false;
    for epoch in 0..config.max_epochs {
        let cache = model.forward(&data.features);
        let (train_loss, grads) = model.loss_and_grad(&cache, &data.labels, &data.train, config.weight_decay);
        if !train_loss.is_finite() || grads.iter().flatten().any(|g| !g.as_slice().iter().all(|v| v.is_finite())) {
            return Err(Error::Diverged {
                epoch,
                last_finite_epoch: epoch.checked_sub(1),
            });
        }
        let logits = cache.logits();
        let val_loss = if data.val.is_empty() {
            f64::NAN
        } else {
            softmax_xent(logits, &data.labels, &data.val).0
        };
        let stats = EpochStats {
            epoch,
            train_loss,
            val_loss,
            train_acc: accuracy(logits, &data.labels, &data.train),
            val_acc: accuracy(logits, &data.labels, &data.val),
            test_acc: accuracy(logits, &data.labels, &data.test),
        };
        if best.is_none_or(|(_, v, _)| stats.val_acc > v) {
            best = Some((epoch, stats.val_acc, stats.test_acc));
        }
        history.push(stats);
        let (best_epoch, _, _) = best.unwrap();
        if epoch - best_epoch >= config.patience {
            stopped_early = true;
            break;
        }
        model.step(&grads, config.learning_rate);
    }
    let (best_epoch, best_val_acc, test_acc) = best.expect("at least one epoch");
    Ok(TrainResult {
        history,
        best_epoch,
        best_val_acc,
        test_acc,
        stopped_early,
        seed,
    })
}

/// Largest relative error between analytic and central-difference
/// gradients over `n_probes` random weight entries of a freshly initialized
/// model. The error of one probe is `|g - ĝ| / max(|g|, |ĝ|, 1e-6)`.
///
/// A probe is redrawn when any pre-activation lies within `1e-8` of zero or
/// changes sign between the `+ε` and `-ε` evaluations, since the PReLU kink
/// makes the loss non-differentiable there.
pub fn finite_diff_gradcheck(
    config: &ModelConfig,
    data: &Dataset,
    options: &TrainOptions,
    epsilon: f64,
    n_probes: usize,
    seed: u64,
) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&epsilon) {
        return Err(Error::domain(format!("epsilon must lie in [1e-7, 1e-3], got {epsilon}")));
    }
    check_data(data)?;
    let mut model = Model::init(config, data, options, seed)?;
    let wd = config.weight_decay;
    let (_, grads) = model.loss_and_grad(&model.forward(&data.features), &data.labels, &data.train, wd);
    let hidden_pre = |m: &Model| -> Vec<f64> {
        let c = m.forward(&data.features);
        c.z[..c.z.len() - 1].iter().flat_map(|z| z.as_slice().to_vec()).collect()
    };
    let linear = config.slope == 1.0;

    let mut rng = stream_rng(seed, STREAM_PROBE);
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < n_probes {
        attempts += 1;
        if attempts > 50 * n_probes.max(1) {
            return Err(Error::Numeric(format!(
                "only {accepted} of {n_probes} probes avoided the activation kink"
            )));
        }
        let layer = rng.random_range(0..model.weights.len());
        let piece = rng.random_range(0..model.weights[layer].len());
        let (rows, cols) = model.weights[layer][piece].shape();
        let (r, c) = (rng.random_range(0..rows), rng.random_range(0..cols));
        let orig = model.weights[layer][piece][(r, c)];

        model.weights[layer][piece][(r, c)] = orig + epsilon;
        let (lp, zp) = (model.loss(data, wd), hidden_pre(&model));
        model.weights[layer][piece][(r, c)] = orig - epsilon;
        let (lm, zm) = (model.loss(data, wd), hidden_pre(&model));
        model.weights[layer][piece][(r, c)] = orig;
        let crosses_kink = zp
            .iter()
            .zip(&zm)
            .any(|(a, b)| (*a >= 0.0) != (*b >= 0.0) || (a.abs().min(b.abs()) < 1e-8 && a != b));
        if !linear && crosses_kink {
            continue;
        }
        let numeric = (lp - lm) / (2.0 * epsilon);
        let analytic = grads[layer][piece][(r, c)];
        let err = (numeric - analytic).abs() / numeric.abs().max(analytic.abs()).max(1e-6);
        worst = worst.max(err);
        accepted += 1;
    }
    Ok(worst)
}

/// Half the inverse curvature of the training loss along the initial
/// gradient direction `ĝ`, with the curvature estimated as
/// `‖∇f(w + h ĝ) - ∇f(w)‖ / h`.
pub fn curvature_learning_rate(config: &ModelConfig, data: &Dataset, options: &TrainOptions, seed: u64) -> Result<f64> {
    check_data(data)?;
    let model = Model::init(config, data, options, seed)?;
    let wd = config.weight_decay;
    let (_, g0) = model.loss_and_grad(&model.forward(&data.features), &data.labels, &data.train, wd);
    let gnorm = g0.iter().flatten().map(|g| g.as_slice().iter().map(|v| v * v).sum::<f64>()).sum::<f64>().sqrt();
    if gnorm == 0.0 {
        return Ok(config.learning_rate);
    }
    let h = 1e-4;
    let mut probe = model.clone();
    probe.step(&g0, h / gnorm);
    let (_, g1) = probe.loss_and_grad(&probe.forward(&data.features), &data.labels, &data.train, wd);
    let diff = g0
        .iter()
        .flatten()
        .zip(g1.iter().flatten())
        .map(|(a, b)| a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).powi(2)).sum::<f64>())
        .sum::<f64>()
        .sqrt();
    let curvature = diff / h;
    Ok(if curvature > 0.0 { 0.5 / curvature } else { config.learning_rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::Strategy;
    use crate::train::{generate_sbm, Backbone, SbmSpec};

    fn small_data(noise: f64) -> Dataset {
        let spec = SbmSpec {
            nodes: 60,
            blocks: 3,
            p_in: 0.3,
            p_out: 0.02,
            dim: 4,
            noise,
            train_frac: 0.5,
            val_frac: 0.25,
            test_frac: 0.25,
        };
        generate_sbm(&spec, 7).unwrap()
    }

    #[test]
    fn gradcheck_every_backbone_and_strategy() {
        let data = small_data(0.5);
        let strategies = [
            Strategy::None,
            Strategy::Random,
            Strategy::ConnectivityAware { parts: 3, skeleton: true },
        ];
        for backbone in Backbone::ALL {
            for s in strategies {
                let k = if s == Strategy::None { 1 } else { 2 };
                let cfg = ModelConfig {
                    hidden: 5,
                    ..ModelConfig::new(backbone, 3).with_uniform_k(k)
                };
                let err = finite_diff_gradcheck(&cfg, &data, &TrainOptions::with_strategy(s), 1e-5, 40, 3).unwrap();
                assert!(err < 1e-4, "{backbone} {s:?}: {err}");
            }
        }
    }

    #[test]
    fn gradcheck_linear_network_is_tight() {
        let data = small_data(0.5);
        let cfg = ModelConfig {
            slope: 1.0,
            hidden: 4,
            ..ModelConfig::new(Backbone::Gcn, 3)
        };
        let err = finite_diff_gradcheck(&cfg, &data, &TrainOptions::default(), 1e-5, 30, 1).unwrap();
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn all_ones_schedule_matches_undecomposed_bitwise() {
        let data = small_data(0.5);
        let cfg = ModelConfig {
            max_epochs: 15,
            ..ModelConfig::new(Backbone::ResGcn, 3)
        };
        let plain = train(&cfg, &data, &TrainOptions::default(), 4).unwrap();
        for s in [Strategy::Random, Strategy::ConnectivityAware { parts: 2, skeleton: true }] {
            let other = train(&cfg, &data, &TrainOptions::with_strategy(s), 4).unwrap();
            assert_eq!(plain, other);
        }
    }

    #[test]
    fn early_stopping_respects_patience() {
        let data = small_data(0.5);
        let cfg = ModelConfig {
            patience: 5,
            max_epochs: 500,
            ..ModelConfig::new(Backbone::Gcn, 2)
        };
        let r = train(&cfg, &data, &TrainOptions::default(), 0).unwrap();
        assert!(r.stopped_early);
        assert_eq!(r.history.len() - 1, r.best_epoch + cfg.patience);
        let best = r.history[r.best_epoch].val_acc;
        assert!(r.history.iter().all(|e| e.val_acc <= best));
    }

    #[test]
    fn divergence_is_reported() {
        let data = small_data(0.5);
        let cfg = ModelConfig {
            learning_rate: 1e6,
            max_epochs: 100,
            patience: 100,
            ..ModelConfig::new(Backbone::Gcn, 4)
        };
        match train(&cfg, &data, &TrainOptions::default(), 0) {
            Err(Error::Diverged { epoch, last_finite_epoch }) => {
                assert!(epoch > 0);
                assert_eq!(last_finite_epoch, Some(epoch - 1));
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn small_steps_do_not_increase_loss() {
        let data = small_data(0.0);
        let base = ModelConfig {
            max_epochs: 10,
            patience: 10,
            ..ModelConfig::new(Backbone::Gcn, 2)
        };
        let lr = curvature_learning_rate(&base, &data, &TrainOptions::default(), 2).unwrap();
        let cfg = ModelConfig {
            learning_rate: lr,
            ..base
        };
        let r = train(&cfg, &data, &TrainOptions::default(), 2).unwrap();
        assert_eq!(r.history.len(), 10);
        for w in r.history.windows(2) {
            assert!(w[1].train_loss <= w[0].train_loss, "{} > {}", w[1].train_loss, w[0].train_loss);
        }
    }

    #[test]
    fn gradcheck_rejects_bad_epsilon() {
        let data = small_data(0.5);
        let cfg = ModelConfig::default();
        assert!(finite_diff_gradcheck(&cfg, &data, &TrainOptions::default(), 1e-2, 5, 0).is_err());
    }
}
