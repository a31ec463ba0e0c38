//! Information-decay curves over depth: theoretical bound, realized
//! end-to-end singular extremes and quantized entropy per depth.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::weights::{random_orthogonal, rescale_to_norm};
use super::{linearized_prefixes, quantized_entropy, LayerStack};
use crate::error::{Error, Result};
use crate::graph_core::{normalized_adjacency, DenseMatrix, Graph};
use crate::rng::{stream_rng, STREAM_INIT, STREAM_SAMPLES};
use crate::spectral::spectral_extremes;

pub const CURVE_HEADER: [&str; 8] = [
    "depth",
    "bound",
    "max_sv",
    "min_sv",
    "entropy_bits",
    "n_samples",
    "epsilon",
    "seed",
];

/// How layer weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// `scale · Q` with `Q` uniformly random orthogonal: every singular
    /// value equals `scale`.
    Orthogonal { scale: f64 },
    /// Uniform random entries rescaled to spectral norm `max_sv`.
    SpectralNorm { max_sv: f64 },
}

impl WeightSpec {
    fn draw<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Result<DenseMatrix> {
        match *self {
            WeightSpec::Orthogonal { scale } => Ok(random_orthogonal(d, rng).scale(scale)),
            WeightSpec::SpectralNorm { max_sv } => rescale_to_norm(&DenseMatrix::random_uniform(d, d, rng), max_sv),
        }
    }
}

/// Recipe for stacks of any depth over fixed pieces with square `dim × dim`
/// weights. Deeper stacks extend shallower ones drawn with the same seed.
#[derive(Debug, Clone, PartialEq)]
pub struct StackSpec {
    pub pieces: Vec<DenseMatrix>,
    pub dim: usize,
    pub weights: WeightSpec,
    pub slope: f64,
}

impl StackSpec {
    /// Self-looped normalized adjacency of `g` (`σ_A = 1`) with orthogonal
    /// weights of norm `sigma_w`.
    pub fn decay(g: &Graph, dim: usize, sigma_w: f64, slope: f64) -> Result<Self> {
        Ok(Self {
            pieces: vec![normalized_adjacency(g, true)?],
            dim,
            weights: WeightSpec::Orthogonal { scale: sigma_w },
            slope,
        })
    }

    /// `A = 2I` and orthogonal weights scaled so that `a γ_A γ_W = gain`.
    pub fn preserve(n: usize, dim: usize, slope: f64, gain: f64) -> Self {
        Self {
            pieces: vec![DenseMatrix::identity(n).scale(2.0)],
            dim,
            weights: WeightSpec::Orthogonal { scale: gain / (2.0 * slope) },
            slope,
        }
    }

    /// `A = I`, `W = I` scaled orthogonal with scale one.
    pub fn identity(n: usize, dim: usize, slope: f64) -> Self {
        Self {
            pieces: vec![DenseMatrix::identity(n)],
            dim,
            weights: WeightSpec::Orthogonal { scale: 1.0 },
            slope,
        }
    }

    pub fn node_count(&self) -> usize {
        self.pieces[0].rows()
    }

    pub fn build(&self, depth: usize, seed: u64) -> Result<LayerStack> {
        if self.pieces.is_empty() {
            return Err(Error::domain("stack spec needs at least one piece"));
        }
        let mut rng = stream_rng(seed, STREAM_INIT);
        let mut layers = Vec::with_capacity(depth);
        for _ in 0..depth {
            let layer = (0..self.pieces.len())
                .map(|_| self.weights.draw(self.dim, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            layers.push(layer);
        }
        if self.pieces.len() == 1 {
            let ws = layers.into_iter().map(|mut l| l.remove(0)).collect();
            LayerStack::gcn(self.pieces[0].clone(), ws, self.slope)
        } else {
            LayerStack::graphcnn(self.pieces.clone(), layers, self.slope)
        }
    }

    /// Unit-Frobenius-norm Gaussian inputs, column-stacked.
    pub fn samples(&self, n_samples: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = stream_rng(seed, STREAM_SAMPLES);
        let len = self.node_count() * self.dim;
        (0..n_samples)
            .map(|_| {
                let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.into_iter().map(|x| x / norm).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub depth: usize,
    /// `(sup_i σ_max(Mᵢ))^depth`; for GCN stacks `(σ_A σ_W)^depth`.
    pub bound: f64,
    /// Largest realized end-to-end singular value over the samples.
    pub max_sv: f64,
    /// Smallest realized end-to-end singular value over the samples.
    pub min_sv: f64,
    pub entropy_bits: f64,
    pub n_samples: usize,
    pub epsilon: f64,
    pub seed: u64,
}

/// Evaluates the stack built from `spec` at each depth in `depths` on
/// `n_samples` random unit inputs.
pub fn decay_curve(
    spec: &StackSpec,
    depths: &[usize],
    n_samples: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<CurveRow>> {
    if depths.is_empty() || depths[0] == 0 || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("depths must be positive and strictly ascending"));
    }
    if n_samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let max_depth = *depths.last().unwrap();
    let stack = spec.build(max_depth, seed)?;
    let per_layer = layer_upper_gain(&stack)?;

    // per sample: (outputs, (max, min)) at each requested depth
    let per_sample = spec
        .samples(n_samples, seed)
        .par_iter()
        .map(|x| {
            let maps = linearized_prefixes(&stack, x)?;
            depths
                .iter()
                .map(|&l| {
                    let m = &maps[l - 1];
                    Ok((m.output.clone(), spectral_extremes(&m.matrix)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(depths
        .iter()
        .enumerate()
        .map(|(di, &depth)| {
            let outputs: Vec<Vec<f64>> = per_sample.iter().map(|s| s[di].0.clone()).collect();
            let max_sv = per_sample.iter().map(|s| s[di].1 .0).fold(f64::NEG_INFINITY, f64::max);
            let min_sv = per_sample.iter().map(|s| s[di].1 .1).fold(f64::INFINITY, f64::min);
            CurveRow {
                depth,
                bound: per_layer.powi(depth as i32),
                max_sv,
                min_sv,
                entropy_bits: quantized_entropy(&outputs, epsilon),
                n_samples,
                epsilon,
                seed,
            }
        })
        .collect())
}

/// `σ_A σ_W` for single-piece stacks (from the factor extremes, not the
/// Kronecker product), `sup_i σ_max(Mᵢ)` otherwise.
fn layer_upper_gain(stack: &LayerStack) -> Result<f64> {
    if stack.pieces().len() == 1 {
        let (sigma_a, _) = spectral_extremes(&stack.pieces()[0])?;
        let mut sigma_w = f64::NEG_INFINITY;
        for i in 0..stack.depth() {
            sigma_w = sigma_w.max(spectral_extremes(&stack.layer_weights(i)[0])?.0);
        }
        Ok(sigma_a * sigma_w)
    } else {
        let mut up = f64::NEG_INFINITY;
        for i in 0..stack.depth() {
            up = up.max(spectral_extremes(&stack.layer_operator(i)?)?.0);
        }
        Ok(up)
    }
}

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| Error::Format(format!("csv write failed: {e}"));
    w.write_record(CURVE_HEADER).map_err(to_err)?;
    for r in rows {
        w.write_record([
            r.depth.to_string(),
            format!("{:e}", r.bound),
            format!("{:e}", r.max_sv),
            format!("{:e}", r.min_sv),
            r.entropy_bits.to_string(),
            r.n_samples.to_string(),
            format!("{:e}", r.epsilon),
            r.seed.to_string(),
        ])
        .map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::Format(format!("csv flush failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::unweighted(n, &pairs).unwrap()
    }

    #[test]
    fn identity_single_depth_keeps_every_sample() {
        let spec = StackSpec::identity(4, 2, 0.2);
        let rows = decay_curve(&spec, &[1], 16, 1e-6, 0).unwrap();
        assert_eq!(rows[0].entropy_bits, 4.0);
        assert_eq!(rows[0].bound, 1.0);
    }

    #[test]
    fn decay_bound_is_half_to_the_depth() {
        let spec = StackSpec::decay(&cycle(6), 2, 0.5, 0.2).unwrap();
        let rows = decay_curve(&spec, &[1, 2, 3, 6], 8, 1e-6, 1).unwrap();
        for r in &rows {
            let expect = 0.5f64.powi(r.depth as i32);
            assert!((r.bound - expect).abs() <= 1e-12 * expect);
            assert!(r.max_sv <= expect + 1e-12);
        }
    }

    #[test]
    fn preserve_stack_keeps_entropy() {
        let spec = StackSpec::preserve(3, 2, 0.6, 1.2);
        let rows = decay_curve(&spec, &[1, 2, 3, 4], 32, 1e-6, 2).unwrap();
        for r in &rows {
            assert_eq!(r.entropy_bits, 5.0);
            assert!(r.min_sv >= 1.2f64.powi(r.depth as i32) - 1e-9);
        }
    }

    #[test]
    fn deeper_stacks_extend_shallower_ones() {
        let spec = StackSpec::decay(&cycle(5), 2, 0.5, 0.2).unwrap();
        let deep = spec.build(4, 9).unwrap();
        assert_eq!(spec.build(2, 9).unwrap(), deep.truncated(2).unwrap());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let spec = StackSpec::identity(2, 1, 0.5);
        let rows = decay_curve(&spec, &[1, 2], 2, 1e-3, 0).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "depth,bound,max_sv,min_sv,entropy_bits,n_samples,epsilon,seed");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn bad_depth_lists_are_rejected() {
        let spec = StackSpec::identity(2, 1, 0.5);
        assert!(decay_curve(&spec, &[2, 1], 2, 1e-3, 0).is_err());
        assert!(decay_curve(&spec, &[0], 2, 1e-3, 0).is_err());
        assert!(decay_curve(&spec, &[], 2, 1e-3, 0).is_err());
    }
}
