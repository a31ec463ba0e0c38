//! Graph-convolution model with hand-written backward pass.
//!
//! Layer `i` computes `Zᵢ = Σₖ Aᵢₖ Uᵢ Wᵢₖ` where `Uᵢ` is the column
//! concatenation of the stored activations named by the layer plan
//! (`H₀ = X`). Hidden layers store `Hᵢ = σ(Zᵢ)` (plus a residual input for
//! `resgcn`); the last layer's `Z` are the class logits.

use rand::Rng;

use super::config::{Backbone, ModelConfig};
use super::sbm::Dataset;
use crate::decompose::{decompose_schedule, PieceNormalization, SkeletonWeight, Strategy};
use crate::error::{Error, Result};
use crate::graph_core::{CsrMatrix, DenseMatrix};
use crate::propagate::prelu;
use crate::rng::{stream_rng, STREAM_INIT};

/// How the graph is decomposed for each layer and how pieces are
/// normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub strategy: Strategy,
    pub normalization: PieceNormalization,
    pub skeleton_weight: SkeletonWeight,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::None,
            normalization: PieceNormalization::default(),
            skeleton_weight: SkeletonWeight::Verbatim,
        }
    }
}

impl TrainOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
struct LayerPlan {
    /// Indices into the activation list (`0` is the input features).
    inputs: Vec<usize>,
    residual: Option<usize>,
    din: usize,
    dout: usize,
}

fn plan(backbone: Backbone, depth: usize, input: usize, hidden: usize, classes: usize) -> Vec<LayerPlan> {
    let last = depth - 1;
    (0..depth)
        .map(|i| {
            let dout = if i == last { classes } else { hidden };
            let inputs: Vec<usize> = match backbone {
                _ if i == 0 => vec![0],
                Backbone::Gcn | Backbone::ResGcn => vec![i],
                Backbone::DenseGcn => (1..=i).collect(),
                Backbone::JkNet if i == last => (1..=i).collect(),
                Backbone::JkNet => vec![i],
            };
            let din = if i == 0 { input } else { hidden * inputs.len() };
            let residual = (backbone == Backbone::ResGcn && i > 0 && i < last).then_some(i);
            LayerPlan {
                inputs,
                residual,
                din,
                dout,
            }
        })
        .collect()
}

pub(crate) struct Cache {
    /// Per layer, per piece `Aₖ U`.
    au: Vec<Vec<DenseMatrix>>,
    pub z: Vec<DenseMatrix>,
}

impl Cache {
    pub fn logits(&self) -> &DenseMatrix {
        self.z.last().unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    slope: f64,
    ops: Vec<Vec<CsrMatrix>>,
    ops_t: Vec<Vec<CsrMatrix>>,
    plans: Vec<LayerPlan>,
    pub(crate) weights: Vec<Vec<DenseMatrix>>,
}

/// Glorot-uniform in `[-s, s]`, `s = √(6 / (din + dout))`.
fn glorot<R: Rng + ?Sized>(din: usize, dout: usize, rng: &mut R) -> DenseMatrix {
    let s = (6.0 / (din + dout) as f64).sqrt();
    DenseMatrix::from_fn(din, dout, |_, _| rng.random_range(-s..s))
}

impl Model {
    /// Decomposes every layer per `config.k_schedule` (layer `i` with seed
    /// `seed + i`) and draws Glorot-uniform weights.
    pub fn init(config: &ModelConfig, data: &Dataset, options: &TrainOptions, seed: u64) -> Result<Self> {
        config.validate()?;
        let decomps = decompose_schedule(&data.graph, &config.k_schedule, options.strategy, seed)?;
        let mut ops = Vec::with_capacity(config.depth);
        for d in &decomps {
            ops.push(d.piece_operators(&data.graph, options.normalization, options.skeleton_weight)?);
        }
        let ops_t = ops.iter().map(|l| l.iter().map(CsrMatrix::transpose).collect()).collect();
        let plans = plan(config.backbone, config.depth, data.feature_dim(), config.hidden, data.classes);
        let mut rng = stream_rng(seed, STREAM_INIT);
        let weights = plans
            .iter()
            .zip(&ops)
            .map(|(p, pieces)| (0..pieces.len()).map(|_| glorot(p.din, p.dout, &mut rng)).collect())
            .collect();
        Ok(Self {
            slope: config.slope,
            ops,
            ops_t,
            plans,
            weights,
        })
    }

    pub fn depth(&self) -> usize {
        self.plans.len()
    }

    pub fn pieces_per_layer(&self) -> Vec<usize> {
        self.ops.iter().map(Vec::len).collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().flatten().map(|w| w.rows() * w.cols()).sum()
    }

    pub(crate) fn forward(&self, x: &DenseMatrix) -> Cache {
        let mut h = vec![x.clone()];
        let mut au = Vec::with_capacity(self.depth());
        let mut z = Vec::with_capacity(self.depth());
        for (i, plan) in self.plans.iter().enumerate() {
            let u = concat(&h, &plan.inputs);
            let prods: Vec<DenseMatrix> = self.ops[i].iter().map(|a| a.spmm(&u)).collect();
            let mut zi = DenseMatrix::zeros(x.rows(), plan.dout);
            for (p, w) in prods.iter().zip(&self.weights[i]) {
                zi.add_assign_scaled(&p.matmul(w), 1.0);
            }
            if i + 1 < self.depth() {
                let mut hi = zi.map(|v| prelu(v, self.slope));
                if let Some(r) = plan.residual {
                    hi.add_assign_scaled(&h[r], 1.0);
                }
                h.push(hi);
            }
            au.push(prods);
            z.push(zi);
        }
        Cache { au, z }
    }

    /// Mean softmax cross-entropy over `rows` plus `wd/2 · Σ‖W‖²`, and the
    /// gradient with respect to every weight.
    pub(crate) fn loss_and_grad(
        &self,
        cache: &Cache,
        labels: &[usize],
        rows: &[usize],
        weight_decay: f64,
    ) -> (f64, Vec<Vec<DenseMatrix>>) {
        let logits = cache.logits();
        let (data_loss, mut dz) = softmax_xent(logits, labels, rows);
        let loss = data_loss + 0.5 * weight_decay * self.squared_norm();

        let depth = self.depth();
        let mut dh: Vec<Option<DenseMatrix>> = vec![None; depth];
        let mut grads: Vec<Vec<DenseMatrix>> = vec![Vec::new(); depth];
        for i in (0..depth).rev() {
            let plan = &self.plans[i];
            if i + 1 < depth {
                let g = dh[i + 1].take().expect("every hidden output feeds a later layer");
                if let Some(r) = plan.residual {
                    accumulate(&mut dh[r], &g);
                }
                let slope = self.slope;
                dz = DenseMatrix::from_fn(g.rows(), g.cols(), |a, b| {
                    if cache.z[i][(a, b)] >= 0.0 {
                        g[(a, b)]
                    } else {
                        slope * g[(a, b)]
                    }
                });
            }
            grads[i] = cache.au[i]
                .iter()
                .zip(&self.weights[i])
                .map(|(p, w)| {
                    let mut gw = p.t_matmul(&dz);
                    gw.add_assign_scaled(w, weight_decay);
                    gw
                })
                .collect();
            if i == 0 {
                continue;
            }
            let mut du = DenseMatrix::zeros(dz.rows(), plan.din);
            for (at, w) in self.ops_t[i].iter().zip(&self.weights[i]) {
                du.add_assign_scaled(&at.spmm(&dz.matmul_t(w)), 1.0);
            }
            let width = du.cols() / plan.inputs.len();
            for (slot, &src) in plan.inputs.iter().enumerate() {
                accumulate(&mut dh[src], &du.columns(slot * width, width));
            }
        }
        (loss, grads)
    }

    pub(crate) fn squared_norm(&self) -> f64 {
        self.weights
            .iter()
            .flatten()
            .map(|w| w.as_slice().iter().map(|v| v * v).sum::<f64>())
            .sum()
    }

    pub(crate) fn step(&mut self, grads: &[Vec<DenseMatrix>], lr: f64) {
        for (layer, glayer) in self.weights.iter_mut().zip(grads) {
            for (w, g) in layer.iter_mut().zip(glayer) {
                w.add_assign_scaled(g, -lr);
            }
        }
    }

    pub(crate) fn loss(&self, data: &Dataset, weight_decay: f64) -> f64 {
        let cache = self.forward(&data.features);
        softmax_xent(cache.logits(), &data.labels, &data.train).0 + 0.5 * weight_decay * self.squared_norm()
    }
}

fn concat(h: &[DenseMatrix], idx: &[usize]) -> DenseMatrix {
    let mut out = h[idx[0]].clone();
    for &j in &idx[1..] {
        out = out.hcat(&h[j]);
    }
    out
}

fn accumulate(slot: &mut Option<DenseMatrix>, g: &DenseMatrix) {
    match slot {
        Some(acc) => acc.add_assign_scaled(g, 1.0),
        None => *slot = Some(g.clone()),
    }
}

/// Mean cross-entropy over `rows` and its gradient with respect to the
/// logits (zero outside `rows`).
pub(crate) fn softmax_xent(logits: &DenseMatrix, labels: &[usize], rows: &[usize]) -> (f64, DenseMatrix) {
    let mut grad = DenseMatrix::zeros(logits.rows(), logits.cols());
    let scale = 1.0 / rows.len() as f64;
    let mut loss = 0.0;
    for &r in rows {
        let z = logits.row(r);
        let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = z.iter().map(|v| (v - m).exp()).sum();
        let lse = m + sum.ln();
        loss += lse - z[labels[r]];
        for (c, v) in z.iter().enumerate() {
            let p = (v - lse).exp();
            grad[(r, c)] = scale * (p - if c == labels[r] { 1.0 } else { 0.0 });
        }
    }
    (loss * scale, grad)
}

/// Fraction of `rows` whose arg-max logit equals the label.
pub(crate) fn accuracy(logits: &DenseMatrix, labels: &[usize], rows: &[usize]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let hits = rows
        .iter()
        .filter(|&&r| {
            let z = logits.row(r);
            let arg = (0..z.len()).fold(0, |best, c| if z[c] > z[best] { c } else { best });
            arg == labels[r]
        })
        .count();
    hits as f64 / rows.len() as f64
}

pub(crate) fn check_data(data: &Dataset) -> Result<()> {
    if data.train.is_empty() {
        return Err(Error::domain("training split is empty"));
    }
    if data.features.rows() != data.node_count() || data.labels.len() != data.node_count() {
        return Err(Error::domain("features / labels do not match the node count"));
    }
    if data.labels.iter().any(|&l| l >= data.classes) {
        return Err(Error::domain("label out of range"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_for_each_backbone() {
        let inputs = |b| plan(b, 4, 5, 8, 3).into_iter().map(|p| p.inputs).collect::<Vec<_>>();
        assert_eq!(inputs(Backbone::Gcn), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(inputs(Backbone::DenseGcn), vec![vec![0], vec![1], vec![1, 2], vec![1, 2, 3]]);
        assert_eq!(inputs(Backbone::JkNet), vec![vec![0], vec![1], vec![2], vec![1, 2, 3]]);
        let res: Vec<_> = plan(Backbone::ResGcn, 4, 5, 8, 3).into_iter().map(|p| p.residual).collect();
        assert_eq!(res, vec![None, Some(1), Some(2), None]);
        let dense = plan(Backbone::DenseGcn, 4, 5, 8, 3);
        assert_eq!(dense.iter().map(|p| (p.din, p.dout)).collect::<Vec<_>>(), vec![(5, 8), (8, 8), (16, 8), (24, 3)]);
    }

    #[test]
    fn depth_two_backbones_coincide() {
        let shapes = |b| plan(b, 2, 5, 8, 3).into_iter().map(|p| (p.inputs, p.residual)).collect::<Vec<_>>();
        for b in Backbone::ALL {
            assert_eq!(shapes(b), shapes(Backbone::Gcn));
        }
    }

    #[test]
    fn softmax_gradient_rows_sum_to_zero() {
        let z = DenseMatrix::from_rows(&[&[1.0, 2.0, 0.5], &[0.0, 0.0, 0.0]]);
        let (loss, g) = softmax_xent(&z, &[1, 0], &[0, 1]);
        assert!(loss > 0.0);
        for r in 0..2 {
            assert!(g.row(r).iter().sum::<f64>().abs() < 1e-15);
        }
        assert!(((3.0f64).ln() * 0.5 + 0.5 * softmax_xent(&z, &[1], &[0]).0 - loss).abs() < 1e-12);
        assert_eq!(accuracy(&z, &[1, 0], &[0, 1]), 1.0);
    }
}
