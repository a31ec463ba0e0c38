//! Multilevel partition of the bundled sample graph against a random
//! balanced partition.
//!
//! cargo run --example partition_graph -- [parts]

use degnn::graph_core::{load_edge_list, Indexing};
use degnn::partition::{multilevel_partition, random_balanced_partition, DEFAULT_MAX_IMBALANCE};
use degnn::rng::stream_rng;

fn main() -> degnn::Result<()> {
    let parts: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_graph.txt");
    let g = load_edge_list(path, Indexing::Zero)?;
    let ml = multilevel_partition(&g, parts, 7, DEFAULT_MAX_IMBALANCE)?;
    let rnd = random_balanced_partition(g.node_count(), parts, &mut stream_rng(7, 0));
    println!("graph: {} nodes, {} edges", g.node_count(), g.edge_count());
    println!("multilevel: cut {} sizes {:?} imbalance {:.3}", ml.edge_cut(&g), ml.sizes(), ml.imbalance());
    println!("random:     cut {} sizes {:?}", rnd.edge_cut(&g), rnd.sizes());
    Ok(())
}
