//! Forward propagation through GCN / GraphCNN stacks with parametric ReLU,
//! the exact sign-mask linearization of a realized forward pass, and a
//! quantized-entropy proxy for how much input information survives.

mod curve;
mod entropy;
mod weights;

use crate::error::{Error, Result};
use crate::graph_core::DenseMatrix;
use crate::spectral::{gcn_regime, graphcnn_layer_operator, graphcnn_regime, spectral_extremes, RegimeReport};

pub use curve::{decay_curve, write_curve_csv, CurveRow, StackSpec, WeightSpec, CURVE_HEADER};
pub use entropy::{quantize, quantized_entropy};
pub use weights::{random_orthogonal, rescale_to_norm};

/// Default PReLU slope.
pub const DEFAULT_SLOPE: f64 = 0.2;

/// `σ(z) = max(z, a·z)` for `0 < a ≤ 1`.
pub fn prelu(z: f64, slope: f64) -> f64 {
    if z >= 0.0 {
        z
    } else {
        slope * z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Gcn,
    GraphCnn,
}

/// Layers `Y ← σ(Σₖ Aₖ Y Wₖ)` over fixed pieces `Aₖ`; a GCN stack is the
/// single-piece case.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    variant: Variant,
    pieces: Vec<DenseMatrix>,
    layers: Vec<Vec<DenseMatrix>>,
    slope: f64,
}

impl LayerStack {
    pub fn gcn(a: DenseMatrix, weights: Vec<DenseMatrix>, slope: f64) -> Result<Self> {
        let layers = weights.into_iter().map(|w| vec![w]).collect();
        Self::build(Variant::Gcn, vec![a], layers, slope)
    }

    /// `layers[i][k]` is the weight of piece `k` in layer `i`.
    pub fn graphcnn(pieces: Vec<DenseMatrix>, layers: Vec<Vec<DenseMatrix>>, slope: f64) -> Result<Self> {
        Self::build(Variant::GraphCnn, pieces, layers, slope)
    }

    fn build(variant: Variant, pieces: Vec<DenseMatrix>, layers: Vec<Vec<DenseMatrix>>, slope: f64) -> Result<Self> {
        if !(slope > 0.0 && slope <= 1.0) {
            return Err(Error::domain(format!("PReLU slope must lie in (0, 1], got {slope}")));
        }
        let n = pieces.first().ok_or_else(|| Error::domain("stack needs at least one piece"))?.rows();
        if pieces.iter().any(|a| a.shape() != (n, n)) {
            return Err(Error::domain("pieces must share one square shape"));
        }
        if layers.is_empty() {
            return Err(Error::domain("stack needs at least one layer"));
        }
        let mut width = None;
        for (i, layer) in layers.iter().enumerate() {
            if layer.len() != pieces.len() {
                return Err(Error::domain(format!(
                    "layer {i} has {} weights for {} pieces",
                    layer.len(),
                    pieces.len()
                )));
            }
            let shape = layer[0].shape();
            if layer.iter().any(|w| w.shape() != shape) {
                return Err(Error::domain(format!("layer {i}: piece weights differ in shape")));
            }
            if let Some(prev) = width {
                if shape.0 != prev {
                    return Err(Error::domain(format!(
                        "layer {i} expects width {} but receives {prev}",
                        shape.0
                    )));
                }
            }
            width = Some(shape.1);
        }
        Ok(Self {
            variant,
            pieces,
            layers,
            slope,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn node_count(&self) -> usize {
        self.pieces[0].rows()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0][0].rows()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap()[0].cols()
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn pieces(&self) -> &[DenseMatrix] {
        &self.pieces
    }

    pub fn layer_weights(&self, i: usize) -> &[DenseMatrix] {
        &self.layers[i]
    }

    /// The first `depth` layers.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(Error::domain(format!("cannot truncate depth {} to {depth}", self.depth())));
        }
        Ok(Self {
            layers: self.layers[..depth].to_vec(),
            ..self.clone()
        })
    }

    /// `Σₖ Wₖᵀ ⊗ Aₖ` for layer `i`.
    pub fn layer_operator(&self, i: usize) -> Result<DenseMatrix> {
        graphcnn_layer_operator(&self.pieces, &self.layers[i])
    }

    /// Singular-value certificate of the stack; needs `slope < 1`.
    pub fn regime(&self) -> Result<RegimeReport> {
        match self.variant {
            Variant::Gcn => {
                let ws: Vec<DenseMatrix> = self.layers.iter().map(|l| l[0].clone()).collect();
                gcn_regime(&self.pieces[0], &ws, self.slope)
            }
            Variant::GraphCnn => graphcnn_regime(&self.pieces, &self.layers, self.slope),
        }
    }

    fn preactivation(&self, i: usize, y: &DenseMatrix) -> DenseMatrix {
        let mut z = DenseMatrix::zeros(y.rows(), self.layers[i][0].cols());
        for (a, w) in self.pieces.iter().zip(&self.layers[i]) {
            z.add_assign_scaled(&a.matmul(&y.matmul(w)), 1.0);
        }
        z
    }

    fn check_input(&self, x: &DenseMatrix) -> Result<()> {
        if x.shape() != (self.node_count(), self.input_dim()) {
            return Err(Error::domain(format!(
                "input is {:?}, stack expects {:?}",
                x.shape(),
                (self.node_count(), self.input_dim())
            )));
        }
        Ok(())
    }

    /// Pre-activations and outputs for every layer.
    fn trace(&self, x0: &DenseMatrix) -> Result<(Vec<DenseMatrix>, Vec<DenseMatrix>)> {
        self.check_input(x0)?;
        let mut pre = Vec::with_capacity(self.depth());
        let mut out: Vec<DenseMatrix> = Vec::with_capacity(self.depth());
        for i in 0..self.depth() {
            let z = self.preactivation(i, out.last().unwrap_or(x0));
            out.push(z.map(|v| prelu(v, self.slope)));
            pre.push(z);
        }
        Ok((pre, out))
    }
}

/// Outputs `Y⁽¹⁾, …, Y⁽ˡ⁾`.
pub fn forward(stack: &LayerStack, x0: &DenseMatrix) -> Result<Vec<DenseMatrix>> {
    stack.trace(x0).map(|(_, out)| out)
}

/// Diagonal activation mask with entries in `{a, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskMatrix {
    diag: Vec<f64>,
    slope: f64,
}

impl MaskMatrix {
    pub fn new(diag: Vec<f64>, slope: f64) -> Result<Self> {
        if let Some(bad) = diag.iter().find(|&&v| v != 1.0 && v != slope) {
            return Err(Error::domain(format!("mask entry {bad} is neither 1 nor {slope}")));
        }
        Ok(Self { diag, slope })
    }

    /// Entry `1` where the column-stacked pre-activation is `≥ 0`, else `a`.
    pub fn from_preactivation(z: &DenseMatrix, slope: f64) -> Self {
        let diag = z.vec().into_iter().map(|v| if v >= 0.0 { 1.0 } else { slope }).collect();
        Self { diag, slope }
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_diag(&self.diag)
    }

    /// `P · m`.
    pub fn left_mul(&self, m: &DenseMatrix) -> DenseMatrix {
        assert_eq!(m.rows(), self.dim(), "mask / matrix dimension mismatch");
        DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| self.diag[i] * m[(i, j)])
    }
}

/// The realized end-to-end linear map of one forward pass.
#[derive(Debug, Clone)]
pub struct LinearizedMap {
    /// `P⁽ˡ⁾ Mₗ ⋯ P⁽¹⁾ M₁`, of shape `n·d_l × n·d_0`.
    pub matrix: DenseMatrix,
    /// `matrix · x`.
    pub output: Vec<f64>,
    pub masks: Vec<MaskMatrix>,
}

/// End-to-end products after each layer for input `x` (column-stacked).
pub fn linearized_prefixes(stack: &LayerStack, x: &[f64]) -> Result<Vec<LinearizedMap>> {
    let x0 = DenseMatrix::unvec(x, stack.node_count(), stack.input_dim())?;
    let (pre, _) = stack.trace(&x0)?;
    let mut maps: Vec<LinearizedMap> = Vec::with_capacity(stack.depth());
    let mut masks = Vec::with_capacity(stack.depth());
    for (i, z) in pre.iter().enumerate() {
        let mask = MaskMatrix::from_preactivation(z, stack.slope());
        let step = mask.left_mul(&stack.layer_operator(i)?);
        let matrix = match maps.last() {
            Some(prev) => step.matmul(&prev.matrix),
            None => step,
        };
        masks.push(mask);
        maps.push(LinearizedMap {
            output: matrix.mul_vec(x),
            matrix,
            masks: masks.clone(),
        });
    }
    Ok(maps)
}

pub fn linearized_map(stack: &LayerStack, x: &[f64]) -> Result<LinearizedMap> {
    Ok(linearized_prefixes(stack, x)?.pop().expect("stack has at least one layer"))
}

/// `(largest, smallest)` singular value of the realized end-to-end matrix.
pub fn endtoend_extremes(stack: &LayerStack, x: &[f64]) -> Result<(f64, f64)> {
    spectral_extremes(&linearized_map(stack, x)?.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::{normalized_adjacency, Graph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_graph() -> DenseMatrix {
        let g = Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        normalized_adjacency(&g, true).unwrap()
    }

    fn random_gcn(rng: &mut ChaCha8Rng, depth: usize, d: usize, slope: f64) -> LayerStack {
        let ws = (0..depth).map(|_| DenseMatrix::random_uniform(d, d, rng)).collect();
        LayerStack::gcn(small_graph(), ws, slope).unwrap()
    }

    #[test]
    fn identity_stack_keeps_nonnegative_input() {
        let stack = LayerStack::gcn(DenseMatrix::identity(3), vec![DenseMatrix::identity(2); 4], 0.2).unwrap();
        let x = DenseMatrix::from_rows(&[&[1.0, 0.0], &[2.0, 3.0], &[0.5, 0.25]]);
        for y in forward(&stack, &x).unwrap() {
            assert_eq!(y, x);
        }
        assert_eq!(endtoend_extremes(&stack, &x.vec()).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn unit_slope_is_the_kronecker_product_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let stack = random_gcn(&mut rng, 3, 2, 1.0);
        let x = DenseMatrix::random_uniform(4, 2, &mut rng);
        let mut v = x.vec();
        for i in 0..3 {
            v = stack.layer_weights(i)[0].transpose().kron(&stack.pieces()[0]).mul_vec(&v);
        }
        let y = forward(&stack, &x).unwrap().pop().unwrap();
        let diff = y.vec().iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-12);
    }

    #[test]
    fn linearization_matches_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let stack = random_gcn(&mut rng, 3, 2, 0.2);
            let x = DenseMatrix::random_uniform(4, 2, &mut rng);
            let y = forward(&stack, &x).unwrap().pop().unwrap().vec();
            let lin = linearized_map(&stack, &x.vec()).unwrap();
            let diff = y.iter().zip(&lin.output).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(diff < 1e-10, "diff {diff}");
        }
    }

    #[test]
    fn mixed_sign_preactivation_gives_mixed_mask() {
        let stack = LayerStack::gcn(DenseMatrix::identity(2), vec![DenseMatrix::identity(1)], 0.3).unwrap();
        let lin = linearized_map(&stack, &[1.0, -2.0]).unwrap();
        assert_eq!(lin.masks[0].diag(), &[1.0, 0.3]);
        assert_eq!(lin.output, vec![1.0, -0.6]);
    }

    #[test]
    fn nonnegative_trajectory_has_identity_masks() {
        let a = DenseMatrix::from_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let w = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.5, 1.0]]);
        let stack = LayerStack::gcn(a.clone(), vec![w.clone(), w.clone()], 0.2).unwrap();
        let lin = linearized_map(&stack, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(lin.masks.iter().all(|m| m.diag().iter().all(|&v| v == 1.0)));
        let m = w.transpose().kron(&a);
        assert!(lin.matrix.max_abs_diff(&m.matmul(&m)) < 1e-14);
    }

    #[test]
    fn mask_rejects_foreign_values() {
        assert!(MaskMatrix::new(vec![1.0, 0.2], 0.2).is_ok());
        assert!(MaskMatrix::new(vec![0.5], 0.2).is_err());
    }

    #[test]
    fn shape_errors() {
        let a = DenseMatrix::identity(3);
        let bad = LayerStack::gcn(a.clone(), vec![DenseMatrix::zeros(2, 3), DenseMatrix::zeros(2, 2)], 0.2);
        assert!(bad.is_err());
        assert!(LayerStack::gcn(a.clone(), vec![], 0.2).is_err());
        assert!(LayerStack::gcn(a.clone(), vec![DenseMatrix::identity(2)], 0.0).is_err());
        let ok = LayerStack::gcn(a, vec![DenseMatrix::identity(2)], 0.2).unwrap();
        assert!(forward(&ok, &DenseMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn graphcnn_single_piece_equals_gcn() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gcn = random_gcn(&mut rng, 2, 3, 0.2);
        let layers = (0..2).map(|i| gcn.layer_weights(i).to_vec()).collect();
        let cnn = LayerStack::graphcnn(gcn.pieces().to_vec(), layers, 0.2).unwrap();
        let x = DenseMatrix::random_uniform(4, 3, &mut rng);
        assert_eq!(forward(&gcn, &x).unwrap(), forward(&cnn, &x).unwrap());
    }
}
