//! Dense SVD and the regime certificates built on singular-value extremes.

mod regime;
mod svd;

pub use regime::{
    gcn_regime, graphcnn_layer_operator, graphcnn_regime, kron_sum_spectrum, multiset_max_diff,
    multisets_close, Regime, RegimeReport,
};
pub use svd::{singular_values, spectral_extremes, svd, SvdResult, MAX_SVD_DIM};
