//! Seeded randomized checks of the linear-algebra identities and spectral
//! certificates, each against an independent brute-force computation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::{random_decompose, spectral_split, PieceNormalization, SkeletonWeight};
use crate::error::{Error, Result};
use crate::graph_core::{normalized_adjacency, DenseMatrix, Graph};
use crate::propagate::{forward, linearized_map, random_orthogonal, LayerStack};
use crate::rng::{stream_rng, STREAM_SAMPLES};
use crate::spectral::{gcn_regime, kron_sum_spectrum, multiset_max_diff, singular_values, spectral_extremes, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Forward pass equals its sign-mask linearization.
    Lemma1,
    /// Closed-form spectrum of a Kronecker sum over a full spectral split.
    Lemma3,
    /// Kronecker singular values and the vec identity.
    Kron,
    /// Regime certificates bound the realized end-to-end singular values.
    Regimes,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lemma1, Suite::Lemma3, Suite::Kron, Suite::Regimes];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma3 => "lemma3",
            Suite::Kron => "kron",
            Suite::Regimes => "regimes",
        }
    }

    /// Largest acceptable trial error.
    pub fn tolerance(&self) -> f64 {
        match self {
            Suite::Lemma1 => 1e-9,
            Suite::Lemma3 | Suite::Kron => 1e-8,
            Suite::Regimes => 1e-9,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown verification suite {s:?} (expected lemma1, lemma3, kron or regimes)")))
    }
}

/// Size limits for randomly drawn instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSizes {
    pub max_nodes: usize,
    pub max_dim: usize,
    pub max_depth: usize,
}

impl Default for TrialSizes {
    fn default() -> Self {
        Self {
            max_nodes: 6,
            max_dim: 3,
            max_depth: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    /// Largest error over all trials.
    pub worst: f64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} pass (worst error {:e}, tolerance {:e})",
            self.suite,
            self.passed,
            self.trials,
            self.worst,
            self.suite.tolerance()
        )
    }
}

/// Runs `trials` instances; trial `t` draws from `seed + t`.
pub fn run_suite(suite: Suite, trials: usize, sizes: TrialSizes, seed: u64) -> Result<SuiteReport> {
    if sizes.max_nodes < 2 || sizes.max_dim < 1 || sizes.max_depth < 1 {
        return Err(Error::domain("trial sizes need max_nodes >= 2, max_dim >= 1, max_depth >= 1"));
    }
    let mut passed = 0;
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut rng = stream_rng(seed.wrapping_add(t as u64), STREAM_SAMPLES);
        let err = match suite {
            Suite::Lemma1 => linearization_trial(&mut rng, sizes)?,
            Suite::Lemma3 => spectral_split_trial(&mut rng, sizes)?,
            Suite::Kron => kron_trial(&mut rng, sizes)?,
            Suite::Regimes => regimes_trial(&mut rng, sizes)?,
        };
        worst = worst.max(err);
        if err < suite.tolerance() {
            passed += 1;
        }
    }
    Ok(SuiteReport {
        suite,
        trials,
        passed,
        worst,
    })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.5) {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::new(n, edges)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Alternates GCN and GraphCNN stacks (the latter over a random 2-3 piece
/// split); returns `max |forward − linearized|`.
fn linearization_trial(rng: &mut ChaCha8Rng, sizes: TrialSizes) -> Result<f64> {
    let n = rng.random_range(2..=sizes.max_nodes);
    let depth = rng.random_range(1..=sizes.max_depth);
    let dims: Vec<usize> = (0..=depth).map(|_| rng.random_range(1..=sizes.max_dim)).collect();
    let slope = rng.random_range(0.05..0.95);
    let g = random_graph(rng, n)?;
    let stack = if rng.random_bool(0.5) {
        let ws = (0..depth).map(|i| DenseMatrix::random_uniform(dims[i], dims[i + 1], rng)).collect();
        LayerStack::gcn(normalized_adjacency(&g, true)?, ws, slope)?
    } else {
        let k = rng.random_range(2..=3);
        let d = random_decompose(&g, k, rng.random())?;
        let pieces = d.piece_matrices(&g, PieceNormalization::Global { self_loops: true }, SkeletonWeight::Verbatim)?;
        let layers = (0..depth)
            .map(|i| (0..k).map(|_| DenseMatrix::random_uniform(dims[i], dims[i + 1], rng)).collect())
            .collect();
        LayerStack::graphcnn(pieces, layers, slope)?
    };
    let x = DenseMatrix::random_uniform(n, dims[0], rng);
    let y = forward(&stack, &x)?.pop().unwrap().vec();
    let lin = linearized_map(&stack, &x.vec())?;
    Ok(max_abs_diff(&y, &lin.output))
}

/// Closed-form multiset against the SVD of the explicit `Σ Wₖ ⊗ Aₖ`.
fn spectral_split_trial(rng: &mut ChaCha8Rng, sizes: TrialSizes) -> Result<f64> {
    let n = rng.random_range(2..=sizes.max_nodes);
    let d = rng.random_range(1..=sizes.max_dim);
    let a = DenseMatrix::random_uniform(n, n, rng);
    let pieces = spectral_split(&a, n)?;
    let ws: Vec<DenseMatrix> = (0..n).map(|_| DenseMatrix::random_uniform(d, d, rng)).collect();
    let closed = kron_sum_spectrum(&pieces, &ws)?;
    let mut sum = DenseMatrix::zeros(n * d, n * d);
    for (w, p) in ws.iter().zip(&pieces) {
        sum = &sum + &w.kron(p);
    }
    Ok(multiset_max_diff(&closed, &singular_values(&sum)?))
}

/// Spectrum of `A ⊗ B` against pairwise products, and
/// `vec(ABC) = (Cᵀ ⊗ A) vec(B)`.
fn kron_trial(rng: &mut ChaCha8Rng, sizes: TrialSizes) -> Result<f64> {
    let m = sizes.max_nodes.min(4);
    let (ar, ac) = (rng.random_range(1..=m), rng.random_range(1..=m));
    let (br, bc) = (rng.random_range(1..=m), rng.random_range(1..=m));
    let a = DenseMatrix::random_uniform(ar, ac, rng);
    let b = DenseMatrix::random_uniform(br, bc, rng);
    let sa = singular_values(&a)?;
    let sb = singular_values(&b)?;
    let mut products: Vec<f64> = sa.iter().flat_map(|x| sb.iter().map(move |y| x * y)).collect();
    let k = singular_values(&a.kron(&b))?;
    // the factor spectra give min(ar, ac)·min(br, bc) products; the rest of
    // the min(ar·br, ac·bc) Kronecker singular values are zero
    products.sort_by(|x, y| y.total_cmp(x));
    products.resize(k.len(), 0.0);
    let spectrum_err = multiset_max_diff(&products, &k);

    let bmid = DenseMatrix::random_uniform(ac, br, rng);
    let c2 = DenseMatrix::random_uniform(br, bc, rng);
    let lhs = a.matmul(&bmid).matmul(&c2).vec();
    let rhs = c2.transpose().kron(&a).mul_vec(&bmid.vec());
    // the vec identity is held to 1e-10, a hundredth of the suite tolerance
    Ok(spectrum_err.max(100.0 * max_abs_diff(&lhs, &rhs)))
}

/// Random GCN stacks; the regime label must satisfy its defining
/// inequality, realized maxima must stay under `(σ_A σ_W)^l` and, when the
/// stack is certified preserving, realized minima above `(a γ_A γ_W)^l`.
/// Returns the largest relative violation.
fn regimes_trial(rng: &mut ChaCha8Rng, sizes: TrialSizes) -> Result<f64> {
    let n = rng.random_range(2..=sizes.max_nodes);
    let d = rng.random_range(1..=sizes.max_dim);
    let depth = rng.random_range(1..=sizes.max_depth);
    let slope = rng.random_range(0.1..0.9);
    let a = if rng.random_bool(0.5) {
        normalized_adjacency(&random_graph(rng, n)?, true)?.scale(rng.random_range(0.5..2.5))
    } else {
        random_orthogonal(n, rng).scale(rng.random_range(0.5..2.5))
    };
    let ws: Vec<DenseMatrix> = (0..depth)
        .map(|_| random_orthogonal(d, rng).scale(rng.random_range(0.3..2.5)))
        .collect();
    let report = gcn_regime(&a, &ws, slope)?;
    let upper = report.sigma_a * report.sigma_w;
    let lower = slope * report.gamma_a * report.gamma_w;
    let label_ok = match report.regime {
        Regime::Decay => upper < 1.0,
        Regime::Preserve => upper >= 1.0 && lower >= 1.0,
        Regime::Indeterminate => upper >= 1.0 && lower < 1.0,
    };
    if !label_ok {
        return Ok(f64::INFINITY);
    }
    let stack = LayerStack::gcn(a, ws, slope)?;
    let x = DenseMatrix::random_uniform(n, d, rng);
    let (hi, lo) = spectral_extremes(&linearized_map(&stack, &x.vec())?.matrix)?;
    let bound_hi = upper.powi(depth as i32);
    let mut violation = ((hi - bound_hi) / bound_hi).max(0.0);
    if report.regime == Regime::Preserve {
        let bound_lo = lower.powi(depth as i32);
        violation = violation.max(((bound_lo - lo) / bound_lo).max(0.0));
    }
    Ok(violation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_few_trials() {
        for s in Suite::ALL {
            let r = run_suite(s, 20, TrialSizes::default(), 1).unwrap();
            assert!(r.all_passed(), "{r}");
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("lemma3".parse::<Suite>().unwrap(), Suite::Lemma3);
        assert!("lemma9".parse::<Suite>().is_err());
    }
}
