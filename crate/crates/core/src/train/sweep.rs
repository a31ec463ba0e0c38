//! Grids of training runs, parallel across cells, reported as CSV.

use std::io::Write;

use rayon::prelude::*;

use super::config::{format_schedule, Backbone, ModelConfig};
use super::model::TrainOptions;
use super::sbm::Dataset;
use super::trainer::train;
use crate::decompose::Strategy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub backbone: Backbone,
    pub strategy: String,
    pub depth: usize,
    pub k_schedule: Vec<usize>,
    pub seed: u64,
    pub test_acc: f64,
    pub best_val_acc: f64,
    pub best_epoch: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub backbone: Backbone,
    pub strategy: String,
    pub depth: usize,
    pub k_schedule: Vec<usize>,
    pub runs: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub runs: Vec<RunRow>,
    pub aggregates: Vec<AggregateRow>,
}

pub fn strategy_label(s: &Strategy) -> String {
    match s {
        Strategy::None => "none".into(),
        Strategy::Random => "random".into(),
        Strategy::ConnectivityAware { parts, skeleton: true } => format!("ca(p={parts})"),
        Strategy::ConnectivityAware { parts, skeleton: false } => format!("ca(p={parts},no-skeleton)"),
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone)]
struct Cell {
    config: ModelConfig,
    options: TrainOptions,
}

fn run_cells(cells: &[Cell], data: &Dataset, seeds: &[u64]) -> Result<SweepTable> {
    if seeds.is_empty() {
        return Err(Error::domain("sweep needs at least one seed"));
    }
    let jobs: Vec<(usize, u64)> = (0..cells.len()).flat_map(|c| seeds.iter().map(move |&s| (c, s))).collect();
    let runs = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let cell = &cells[c];
            let r = train(&cell.config, data, &cell.options, seed)?;
            Ok(RunRow {
                backbone: cell.config.backbone,
                strategy: strategy_label(&cell.options.strategy),
                depth: cell.config.depth,
                k_schedule: cell.config.k_schedule.clone(),
                seed,
                test_acc: r.test_acc,
                best_val_acc: r.best_val_acc,
                best_epoch: r.best_epoch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregates = runs
        .chunks(seeds.len())
        .map(|chunk| {
            let accs: Vec<f64> = chunk.iter().map(|r| r.test_acc).collect();
            let (mean, std) = mean_std(&accs);
            let first = &chunk[0];
            AggregateRow {
                backbone: first.backbone,
                strategy: first.strategy.clone(),
                depth: first.depth,
                k_schedule: first.k_schedule.clone(),
                runs: chunk.len(),
                mean,
                std,
                median: median(&accs),
            }
        })
        .collect();
    Ok(SweepTable { runs, aggregates })
}

/// One cell per `K`, every layer split into `K` pieces. `K = 1` is the
/// undecomposed baseline. With `skeleton` off the pieces share no forest.
pub fn k_sweep(
    template: &ModelConfig,
    data: &Dataset,
    ks: &[usize],
    seeds: &[u64],
    parts: usize,
    skeleton: bool,
) -> Result<SweepTable> {
    if ks.is_empty() || ks.contains(&0) {
        return Err(Error::domain("K values must be >= 1"));
    }
    let cells: Vec<Cell> = ks
        .iter()
        .map(|&k| Cell {
            config: template.clone().with_uniform_k(k),
            options: TrainOptions::with_strategy(if k == 1 {
                Strategy::None
            } else {
                Strategy::ConnectivityAware { parts, skeleton }
            }),
        })
        .collect();
    run_cells(&cells, data, seeds)
}

/// One cell per `(backbone, strategy, depth)`. Decomposed strategies use
/// `k` pieces in every layer; `Strategy::None` runs undecomposed.
pub fn depth_sweep(
    template: &ModelConfig,
    data: &Dataset,
    depths: &[usize],
    backbones: &[Backbone],
    strategies: &[Strategy],
    k: usize,
    seeds: &[u64],
) -> Result<SweepTable> {
    if depths.is_empty() || backbones.is_empty() || strategies.is_empty() {
        return Err(Error::domain("depth sweep needs depths, backbones and strategies"));
    }
    let mut cells = Vec::new();
    for &backbone in backbones {
        for strategy in strategies {
            for &depth in depths {
                let layer_k = if *strategy == Strategy::None { 1 } else { k };
                let config = ModelConfig {
                    backbone,
                    depth,
                    ..template.clone()
                }
                .with_uniform_k(layer_k);
                cells.push(Cell {
                    config,
                    options: TrainOptions::with_strategy(*strategy),
                });
            }
        }
    }
    run_cells(&cells, data, seeds)
}

pub const SWEEP_HEADER: [&str; 12] = [
    "kind",
    "backbone",
    "strategy",
    "depth",
    "k_schedule",
    "seed",
    "test_acc",
    "best_val_acc",
    "best_epoch",
    "mean_test_acc",
    "std_test_acc",
    "median_test_acc",
];

impl SweepTable {
    pub fn aggregate(&self, backbone: Backbone, strategy: &str, depth: usize) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.backbone == backbone && a.strategy == strategy && a.depth == depth)
    }

    /// Run rows first, then one aggregate row per cell.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| Error::Format(format!("csv write failed: {e}"));
        w.write_record(SWEEP_HEADER).map_err(to_err)?;
        for r in &self.runs {
            w.write_record([
                "run".to_string(),
                r.backbone.to_string(),
                r.strategy.clone(),
                r.depth.to_string(),
                format_schedule(&r.k_schedule),
                r.seed.to_string(),
                r.test_acc.to_string(),
                r.best_val_acc.to_string(),
                r.best_epoch.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])
            .map_err(to_err)?;
        }
        for a in &self.aggregates {
            w.write_record([
                "aggregate".to_string(),
                a.backbone.to_string(),
                a.strategy.clone(),
                a.depth.to_string(),
                format_schedule(&a.k_schedule),
                "all".to_string(),
                String::new(),
                String::new(),
                String::new(),
                a.mean.to_string(),
                a.std.to_string(),
                a.median.to_string(),
            ])
            .map_err(to_err)?;
        }
        w.flush().map_err(|e| Error::Format(format!("csv flush failed: {e}")))
    }
}
