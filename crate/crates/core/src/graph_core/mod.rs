//! Graph representation, ingestion, normalization and the dense/sparse
//! matrix utilities used everywhere else.

mod features;
mod graph;
mod io;
mod matrix;
mod sparse;

pub use features::FeatureMatrix;
pub use graph::{
    adjacency, connected_components, normalized_adjacency, normalized_adjacency_csr, Components,
    Edge, Graph,
};
pub use io::{format_edge_list, load_edge_list, parse_edge_list, write_edge_list, Indexing};
pub use matrix::DenseMatrix;
pub use sparse::CsrMatrix;

pub(crate) use matrix::dot;
