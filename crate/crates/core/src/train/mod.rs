//! Desk-scale node-classification training with manual backpropagation for
//! GCN-family backbones over any per-layer decomposition schedule.

mod config;
mod model;
mod sbm;
mod sweep;
mod trainer;

pub use config::{format_schedule, parse_schedule, Backbone, ModelConfig};
pub use model::{Model, TrainOptions};
pub use sbm::{generate_sbm, Dataset, SbmSpec};
pub use sweep::{depth_sweep, k_sweep, median, strategy_label, AggregateRow, RunRow, SweepTable, SWEEP_HEADER};
pub use trainer::{curvature_learning_rate, finite_diff_gradcheck, train, EpochStats, TrainResult};
