use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "degnn", version, about = "Connectivity-aware graph decomposition and information-loss lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multilevel k-way partition of an edge list.
    Partition(PartitionArgs),
    /// Split a graph into K pieces (random or connectivity-aware).
    Decompose(DecomposeArgs),
    /// Randomized verification of the spectral identities and certificates.
    Verify(VerifyArgs),
    /// Information-decay curve over depth as CSV.
    Decay(DecayArgs),
    /// Train one model on a synthetic block-model graph.
    Train(TrainArgs),
    /// Test accuracy against the piece count K.
    Ksweep(KsweepArgs),
    /// Test accuracy against depth for several backbones.
    Depthsweep(DepthsweepArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, env = "DEGNN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, env = "DEGNN_OUT", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge list `src dst [weight]`, `#` comments.
    #[arg(long, env = "DEGNN_EDGES")]
    pub edges: PathBuf,
    /// Node ids in the file start at 1.
    #[arg(long, env = "DEGNN_ONE_INDEXED")]
    pub one_indexed: bool,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub graph: GraphInput,
    /// Number of parts.
    #[arg(long, env = "DEGNN_P")]
    pub p: usize,
    /// Largest allowed part size relative to n / p.
    #[arg(long, env = "DEGNN_IMBALANCE", default_value_t = default_imbalance())]
    pub imbalance: f64,
}

fn default_imbalance() -> f64 {
    crate::partition::DEFAULT_MAX_IMBALANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    None,
    Random,
    Ca,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, env = "DEGNN_STRATEGY", value_enum, default_value_t = StrategyArg::Ca)]
    pub strategy: StrategyArg,
    /// Number of pieces.
    #[arg(long, env = "DEGNN_K")]
    pub k: usize,
    /// Number of partition parts (connectivity-aware only).
    #[arg(long, env = "DEGNN_P", default_value_t = 1)]
    pub p: usize,
    /// Write skeleton edges into piece files at weight w / K.
    #[arg(long, env = "DEGNN_DISCOUNT")]
    pub discount: bool,
    /// Use an empty skeleton.
    #[arg(long, env = "DEGNN_NO_SKELETON")]
    pub no_skeleton: bool,
    #[arg(long, env = "DEGNN_IMBALANCE", default_value_t = default_imbalance())]
    pub imbalance: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Suite: lemma1, lemma3, kron or regimes.
    #[arg(long, env = "DEGNN_WHICH")]
    pub which: String,
    #[arg(long, env = "DEGNN_TRIALS", default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "DEGNN_MAX_NODES", default_value_t = 6)]
    pub max_nodes: usize,
    #[arg(long, env = "DEGNN_MAX_DIM", default_value_t = 3)]
    pub max_dim: usize,
    #[arg(long, env = "DEGNN_MAX_DEPTH", default_value_t = 5)]
    pub max_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StackArg {
    /// Normalized adjacency with orthogonal weights of norm `--sigma-w`.
    Decay,
    /// `A = 2I` with weights scaled so that `a γ_A γ_W = --gain`.
    Preserve,
    /// `A = I`, `W` orthogonal.
    Identity,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, env = "DEGNN_STACK", value_enum, default_value_t = StackArg::Decay)]
    pub stack: StackArg,
    /// Graph for the decay stack; a cycle on `--nodes` nodes when absent.
    #[arg(long, env = "DEGNN_EDGES")]
    pub edges: Option<PathBuf>,
    #[arg(long, env = "DEGNN_NODES", default_value_t = 6)]
    pub nodes: usize,
    #[arg(long, env = "DEGNN_DIM", default_value_t = 2)]
    pub dim: usize,
    #[arg(long, env = "DEGNN_SIGMA_W", default_value_t = 0.5)]
    pub sigma_w: f64,
    #[arg(long, env = "DEGNN_GAIN", default_value_t = 1.2)]
    pub gain: f64,
    #[arg(long, env = "DEGNN_SLOPE", default_value_t = crate::propagate::DEFAULT_SLOPE)]
    pub slope: f64,
    /// Depths as `1..12` (inclusive) or `1,2,4`.
    #[arg(long, env = "DEGNN_DEPTHS", default_value = "1..12")]
    pub depths: String,
    #[arg(long, env = "DEGNN_SAMPLES", default_value_t = 16)]
    pub samples: usize,
    #[arg(long, env = "DEGNN_EPSILON", default_value_t = 1e-6)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long, env = "DEGNN_NODES", default_value_t = 400)]
    pub nodes: usize,
    #[arg(long, env = "DEGNN_BLOCKS", default_value_t = 4)]
    pub blocks: usize,
    #[arg(long, env = "DEGNN_P_IN", default_value_t = 0.08)]
    pub p_in: f64,
    #[arg(long, env = "DEGNN_P_OUT", default_value_t = 0.005)]
    pub p_out: f64,
    #[arg(long, env = "DEGNN_FEATURE_DIM", default_value_t = 8)]
    pub feature_dim: usize,
    #[arg(long, env = "DEGNN_NOISE", default_value_t = 1.0)]
    pub noise: f64,
    /// Seed of the synthetic graph, independent of `--seed`.
    #[arg(long, env = "DEGNN_DATA_SEED", default_value_t = 0)]
    pub data_seed: u64,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// `key=value` model config; explicit flags override its entries.
    #[arg(long, env = "DEGNN_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, env = "DEGNN_BACKBONE")]
    pub backbone: Option<String>,
    #[arg(long, env = "DEGNN_DEPTH")]
    pub depth: Option<usize>,
    #[arg(long, env = "DEGNN_HIDDEN")]
    pub hidden: Option<usize>,
    #[arg(long, env = "DEGNN_SLOPE")]
    pub slope: Option<f64>,
    #[arg(long, env = "DEGNN_LR")]
    pub lr: Option<f64>,
    #[arg(long, env = "DEGNN_WEIGHT_DECAY")]
    pub weight_decay: Option<f64>,
    #[arg(long, env = "DEGNN_EPOCHS")]
    pub epochs: Option<usize>,
    #[arg(long, env = "DEGNN_PATIENCE")]
    pub patience: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    /// Each piece normalized on its own, with self-loops.
    PerPiece,
    /// Entries of the whole graph's normalization.
    Global,
    /// Unnormalized adjacency.
    Raw,
}

#[derive(Debug, Args)]
pub struct DecompositionArgs {
    #[arg(long = "decompose", env = "DEGNN_DECOMPOSE", value_enum, default_value_t = StrategyArg::None)]
    pub strategy: StrategyArg,
    /// Partition parts for connectivity-aware decomposition.
    #[arg(long, env = "DEGNN_P", default_value_t = 8)]
    pub p: usize,
    #[arg(long, env = "DEGNN_NO_SKELETON")]
    pub no_skeleton: bool,
    #[arg(long, env = "DEGNN_DISCOUNT")]
    pub discount: bool,
    #[arg(long, env = "DEGNN_NORMALIZATION", value_enum, default_value_t = NormArg::PerPiece)]
    pub normalization: NormArg,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
    /// Pieces per layer, e.g. `3,3,2,2` or `[3,3,2,2]`.
    #[arg(long, env = "DEGNN_K_SCHEDULE")]
    pub k_schedule: Option<String>,
}

#[derive(Debug, Args)]
pub struct KsweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// K values as `1..8` (inclusive) or `1,2,4`.
    #[arg(long, env = "DEGNN_K", default_value = "1..8")]
    pub k: String,
    /// Training seeds as `0..4` or `0,1,2`; defaults to five seeds from `--seed`.
    #[arg(long, env = "DEGNN_SEEDS")]
    pub seeds: Option<String>,
    #[arg(long, env = "DEGNN_P", default_value_t = 8)]
    pub p: usize,
    #[arg(long, env = "DEGNN_NO_SKELETON")]
    pub no_skeleton: bool,
}

#[derive(Debug, Args)]
pub struct DepthsweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, env = "DEGNN_DEPTHS", default_value = "2,4,6,8")]
    pub depths: String,
    #[arg(long, env = "DEGNN_BACKBONES", default_value = "gcn")]
    pub backbones: String,
    /// Decomposed variant compared against the undecomposed baseline.
    #[arg(long = "decompose", env = "DEGNN_DECOMPOSE", value_enum, default_value_t = StrategyArg::Ca)]
    pub strategy: StrategyArg,
    /// Pieces per layer for the decomposed variant.
    #[arg(long, env = "DEGNN_K", default_value_t = 3)]
    pub k: usize,
    #[arg(long, env = "DEGNN_P", default_value_t = 8)]
    pub p: usize,
    #[arg(long, env = "DEGNN_NO_SKELETON")]
    pub no_skeleton: bool,
    #[arg(long, env = "DEGNN_SEEDS")]
    pub seeds: Option<String>,
}
