//! Connectivity-aware graph decomposition for graph neural networks, plus a
//! numerical lab that checks the singular-value certificates of information
//! decay and preservation in GCN / GraphCNN stacks.

pub mod error;
pub mod graph_core;
pub mod rng;
pub mod partition;
pub mod spectral;
pub mod decompose;
pub mod propagate;
pub mod train;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
