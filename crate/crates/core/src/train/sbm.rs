//! Stochastic block model node-classification datasets.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph_core::{DenseMatrix, Graph};
use crate::rng::{stream_rng, STREAM_GRAPH};

const MAX_RETRIES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SbmSpec {
    pub nodes: usize,
    pub blocks: usize,
    pub p_in: f64,
    pub p_out: f64,
    /// Feature dimension; must be at least `blocks`.
    pub dim: usize,
    /// Standard deviation of the Gaussian feature noise.
    pub noise: f64,
    pub train_frac: f64,
    pub val_frac: f64,
    pub test_frac: f64,
}

impl Default for SbmSpec {
    fn default() -> Self {
        Self {
            nodes: 400,
            blocks: 4,
            p_in: 0.08,
            p_out: 0.005,
            dim: 8,
            noise: 1.0,
            train_frac: 0.1,
            val_frac: 0.2,
            test_frac: 0.7,
        }
    }
}

impl SbmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 || self.blocks == 0 || self.blocks > self.nodes {
            return Err(Error::domain("need 1 <= blocks <= nodes"));
        }
        if !(0.0 <= self.p_out && self.p_out < self.p_in && self.p_in <= 1.0) {
            return Err(Error::domain(format!(
                "need 0 <= p_out < p_in <= 1, got p_in={} p_out={}",
                self.p_in, self.p_out
            )));
        }
        if self.dim < self.blocks {
            return Err(Error::domain("feature dimension must be at least the block count"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::domain("noise scale must be finite and non-negative"));
        }
        let fracs = [self.train_frac, self.val_frac, self.test_frac];
        if fracs.iter().any(|f| !(0.0..=1.0).contains(f)) || (fracs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::domain("train/val/test fractions must be in [0, 1] and sum to 1"));
        }
        Ok(())
    }
}

/// A graph with node labels, features and a train / val / test split.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub graph: Graph,
    pub labels: Vec<usize>,
    pub classes: usize,
    pub features: DenseMatrix,
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl Dataset {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.cols()
    }
}

/// Each node picks a block uniformly; edges appear independently with
/// probability `p_in` inside a block and `p_out` across; features are the
/// block one-hot plus Gaussian noise. A draw with an empty block is
/// redrawn a bounded number of times.
pub fn generate_sbm(spec: &SbmSpec, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = stream_rng(seed, STREAM_GRAPH);
    let n = spec.nodes;
    let mut labels = Vec::new();
    for attempt in 0..=MAX_RETRIES {
        labels = (0..n).map(|_| rng.random_range(0..spec.blocks)).collect();
        let mut seen = vec![false; spec.blocks];
        labels.iter().for_each(|&l| seen[l] = true);
        if seen.iter().all(|&s| s) {
            break;
        }
        if attempt == MAX_RETRIES {
            return Err(Error::domain(format!(
                "block assignment left a block empty after {MAX_RETRIES} retries"
            )));
        }
        log::warn!("sbm draw {attempt} left a block empty; redrawing");
    }

    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if labels[u] == labels[v] { spec.p_in } else { spec.p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    let graph = Graph::new(n, edges)?;

    let features = DenseMatrix::from_fn(n, spec.dim, |i, j| {
        let hot = if j == labels[i] { 1.0 } else { 0.0 };
        let z: f64 = rng.sample(StandardNormal);
        hot + spec.noise * z
    });

    let (mut train, mut val, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for b in 0..spec.blocks {
        let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == b).collect();
        members.shuffle(&mut rng);
        let m = members.len();
        let n_train = ((spec.train_frac * m as f64).round() as usize).clamp(1, m);
        let n_val = ((spec.val_frac * m as f64).round() as usize).min(m - n_train);
        train.extend_from_slice(&members[..n_train]);
        val.extend_from_slice(&members[n_train..n_train + n_val]);
        test.extend_from_slice(&members[n_train + n_val..]);
    }
    train.sort_unstable();
    val.sort_unstable();
    test.sort_unstable();

    Ok(Dataset {
        graph,
        labels,
        classes: spec.blocks,
        features,
        train,
        val,
        test,
    })
}
