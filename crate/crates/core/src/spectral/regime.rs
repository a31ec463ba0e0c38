//! Singular-value certificates for the decay / preserve regimes of GCN and
//! GraphCNN stacks with parametric ReLU.

use std::fmt;

use super::svd::{singular_values, spectral_extremes};
use crate::error::{Error, Result};
use crate::graph_core::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Per-layer gain strictly below one: information vanishes with depth.
    Decay,
    /// Per-layer lower gain at least one: the map stays injective.
    Preserve,
    Indeterminate,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Decay => "decay",
            Regime::Preserve => "preserve",
            Regime::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output of [`gcn_regime`] / [`graphcnn_regime`].
///
/// For GraphCNN the adjacency extremes describe `Σₖ Aₖ`, the weight extremes
/// range over every piece weight, and `layer_upper` / `layer_lower` hold the
/// per-layer certificates the classification is based on.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub sigma_a: f64,
    pub gamma_a: f64,
    pub sigma_w: f64,
    pub gamma_w: f64,
    pub slope: f64,
    pub regime: Regime,
    /// `σ_A σ_W` for decay and indeterminate stacks, `a γ_A γ_W` for
    /// preserving ones (GraphCNN: the sup / inf of the layer certificates).
    pub bound_per_layer: f64,
    pub layer_upper: Vec<f64>,
    pub layer_lower: Vec<f64>,
}

impl RegimeReport {
    pub fn upper_gain(&self) -> f64 {
        self.layer_upper.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn lower_gain(&self) -> f64 {
        self.layer_lower.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Flat `key=value` lines.
    pub fn to_kv(&self) -> String {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:e}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "regime={}\nsigma_a={:e}\ngamma_a={:e}\nsigma_w={:e}\ngamma_w={:e}\nslope={}\nbound_per_layer={:e}\nlayer_upper={}\nlayer_lower={}\n",
            self.regime,
            self.sigma_a,
            self.gamma_a,
            self.sigma_w,
            self.gamma_w,
            self.slope,
            self.bound_per_layer,
            join(&self.layer_upper),
            join(&self.layer_lower),
        )
    }
}

fn check_slope(slope: f64) -> Result<()> {
    if slope > 0.0 && slope < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("PReLU slope must lie in (0, 1), got {slope}")))
    }
}

fn classify(upper: f64, lower: f64) -> (Regime, f64) {
    if upper < 1.0 {
        (Regime::Decay, upper)
    } else if lower >= 1.0 {
        (Regime::Preserve, lower)
    } else {
        (Regime::Indeterminate, upper)
    }
}

fn weight_extremes<'a>(weights: impl IntoIterator<Item = &'a DenseMatrix>) -> Result<(f64, f64)> {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for w in weights {
        let (max, min) = spectral_extremes(w)?;
        hi = hi.max(max);
        lo = lo.min(min);
    }
    Ok((hi, lo))
}

/// Classifies a GCN stack `σ(A Y Wᵢ)` from the singular-value extremes of
/// `A` and of the layer weights.
pub fn gcn_regime(a_mat: &DenseMatrix, weights: &[DenseMatrix], slope: f64) -> Result<RegimeReport> {
    if weights.is_empty() {
        return Err(Error::domain("gcn_regime needs at least one weight matrix"));
    }
    check_slope(slope)?;
    if !a_mat.is_square() {
        return Err(Error::domain("adjacency must be square"));
    }
    let (sigma_a, gamma_a) = spectral_extremes(a_mat)?;
    let (sigma_w, gamma_w) = weight_extremes(weights)?;
    let upper = sigma_a * sigma_w;
    let lower = slope * gamma_a * gamma_w;
    let (regime, bound_per_layer) = classify(upper, lower);
    Ok(RegimeReport {
        sigma_a,
        gamma_a,
        sigma_w,
        gamma_w,
        slope,
        regime,
        bound_per_layer,
        layer_upper: vec![upper; weights.len()],
        layer_lower: vec![lower; weights.len()],
    })
}

/// `Σₖ (Wₖᵀ ⊗ Aₖ)`: the linear part of one GraphCNN layer acting on the
/// column-stacked features.
pub fn graphcnn_layer_operator(pieces: &[DenseMatrix], weights: &[DenseMatrix]) -> Result<DenseMatrix> {
    if pieces.is_empty() || pieces.len() != weights.len() {
        return Err(Error::domain(format!(
            "{} pieces but {} weights in layer",
            pieces.len(),
            weights.len()
        )));
    }
    let n = pieces[0].rows();
    let (din, dout) = weights[0].shape();
    let mut sum = DenseMatrix::zeros(n * dout, n * din);
    for (a, w) in pieces.iter().zip(weights) {
        if a.shape() != (n, n) {
            return Err(Error::domain("pieces must share one square shape"));
        }
        if w.shape() != (din, dout) {
            return Err(Error::domain("weights within a layer must share one shape"));
        }
        sum.add_assign_scaled(&w.transpose().kron(a), 1.0);
    }
    Ok(sum)
}

/// Classifies a GraphCNN stack. `piece_weights[i][k]` is the weight applied
/// to piece `k` in layer `i`.
///
/// Layer `i` is certified by the extremes of `Mᵢ = Σₖ Wₖ⁽ⁱ⁾ᵀ ⊗ Aₖ`: the mask
/// has entries in `[a, 1]`, so `σ_max(Mᵢ)` bounds the masked gain from above
/// and `a · σ_min(Mᵢ)` bounds it from below.
pub fn graphcnn_regime(
    pieces: &[DenseMatrix],
    piece_weights: &[Vec<DenseMatrix>],
    slope: f64,
) -> Result<RegimeReport> {
    if pieces.is_empty() {
        return Err(Error::domain("graphcnn_regime needs at least one piece"));
    }
    if piece_weights.is_empty() {
        return Err(Error::domain("graphcnn_regime needs at least one layer"));
    }
    check_slope(slope)?;

    let mut layer_upper = Vec::with_capacity(piece_weights.len());
    let mut layer_lower = Vec::with_capacity(piece_weights.len());
    for (i, layer) in piece_weights.iter().enumerate() {
        if layer.len() != pieces.len() {
            return Err(Error::domain(format!(
                "layer {i} has {} weights for {} pieces",
                layer.len(),
                pieces.len()
            )));
        }
        let m = graphcnn_layer_operator(pieces, layer)?;
        let (hi, lo) = spectral_extremes(&m)?;
        layer_upper.push(hi);
        layer_lower.push(slope * lo);
    }

    let mut total = pieces[0].clone();
    for p in &pieces[1..] {
        total.add_assign_scaled(p, 1.0);
    }
    let (sigma_a, gamma_a) = spectral_extremes(&total)?;
    let (sigma_w, gamma_w) = weight_extremes(piece_weights.iter().flatten())?;

    let upper = layer_upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower = layer_lower.iter().copied().fold(f64::INFINITY, f64::min);
    let (regime, bound_per_layer) = classify(upper, lower);
    Ok(RegimeReport {
        sigma_a,
        gamma_a,
        sigma_w,
        gamma_w,
        slope,
        regime,
        bound_per_layer,
        layer_upper,
        layer_lower,
    })
}

/// Closed-form singular values of `Σₖ Wₖ ⊗ Aₖ` when each `Aₖ` carries
/// exactly one singular direction of `A` (a full spectral split): the union
/// over `k` of `λ(Aₖ) · λⱼ(Wₖ)`, sorted descending.
///
/// `λ(Aₖ)` is read off as the Frobenius norm of the rank-one piece, and only
/// the small `d × d` weights are decomposed.
pub fn kron_sum_spectrum(a_pieces: &[DenseMatrix], w_pieces: &[DenseMatrix]) -> Result<Vec<f64>> {
    if a_pieces.is_empty() || a_pieces.len() != w_pieces.len() {
        return Err(Error::domain(format!(
            "{} adjacency pieces but {} weights",
            a_pieces.len(),
            w_pieces.len()
        )));
    }
    let n = a_pieces[0].rows();
    if a_pieces.len() != n {
        return Err(Error::domain(format!(
            "closed form needs one piece per singular value ({n}), got {}",
            a_pieces.len()
        )));
    }
    let d = w_pieces[0].rows();
    let mut out = Vec::with_capacity(n * d);
    for (a, w) in a_pieces.iter().zip(w_pieces) {
        if !w.is_square() || w.rows() != d {
            return Err(Error::domain("weights must be square and share one size"));
        }
        let lambda = a.frobenius_norm();
        out.extend(singular_values(w)?.into_iter().map(|s| lambda * s));
    }
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// Sorted elementwise comparison with `|x - y| ≤ atol + rtol·max(|x|, |y|)`.
pub fn multisets_close(a: &[f64], b: &[f64], atol: f64, rtol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    a.iter()
        .zip(&b)
        .all(|(x, y)| (x - y).abs() <= atol + rtol * x.abs().max(y.abs()))
}

/// Largest elementwise gap after sorting both lists; infinite on length
/// mismatch.
pub fn multiset_max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_stack_is_indeterminate() {
        let i = DenseMatrix::identity(3);
        let r = gcn_regime(&i, &[DenseMatrix::identity(2)], 0.5).unwrap();
        assert_eq!(r.regime, Regime::Indeterminate);
        assert_eq!(r.bound_per_layer, 1.0);
    }

    #[test]
    fn doubled_identity_preserves() {
        let a = DenseMatrix::identity(3).scale(2.0);
        let r = gcn_regime(&a, &[DenseMatrix::identity(2)], 0.6).unwrap();
        assert_eq!(r.regime, Regime::Preserve);
        assert!((r.bound_per_layer - 1.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let i = DenseMatrix::identity(2);
        assert!(gcn_regime(&i, &[], 0.5).is_err());
        assert!(gcn_regime(&i, &[i.clone()], 1.0).is_err());
        assert!(gcn_regime(&i, &[i.clone()], 0.0).is_err());
        assert!(graphcnn_regime(&[i.clone()], &[vec![]], 0.5).is_err());
        assert!(kron_sum_spectrum(&[i.clone()], &[i.clone(), i.clone()]).is_err());
    }

    #[test]
    fn kv_block_has_regime_line() {
        let a = DenseMatrix::identity(2).scale(0.5);
        let r = gcn_regime(&a, &[DenseMatrix::identity(2)], 0.2).unwrap();
        let kv = r.to_kv();
        assert!(kv.starts_with("regime=decay\n"));
        assert!(kv.contains("bound_per_layer=5e-1"));
    }

    #[test]
    fn multiset_comparison() {
        assert!(multisets_close(&[1.0, 2.0], &[2.0, 1.0], 1e-12, 0.0));
        assert!(!multisets_close(&[1.0, 2.0], &[1.0], 1e-12, 0.0));
        assert!(!multisets_close(&[1.0, 2.0], &[1.0, 2.1], 1e-8, 1e-6));
    }
}
