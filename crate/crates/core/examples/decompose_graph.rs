//! Random versus connectivity-aware decomposition of the sample graph:
//! piece sizes, connected components per piece and skeleton duplication.
//!
//! cargo run --example decompose_graph

use degnn::decompose::{connectivity_aware_decompose, decomposition_stats, random_decompose};
use degnn::graph_core::{load_edge_list, Indexing};

fn main() -> degnn::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_graph.txt");
    let g = load_edge_list(path, Indexing::Zero)?;
    let k = 4;
    let random = random_decompose(&g, k, 1)?;
    println!("random:  {:?}", decomposition_stats(&g, &random));
    for p in [1, 10, 40] {
        let ca = connectivity_aware_decompose(&g, p, k, 1)?;
        println!("ca p={p:<3} {:?}", decomposition_stats(&g, &ca));
    }
    Ok(())
}
