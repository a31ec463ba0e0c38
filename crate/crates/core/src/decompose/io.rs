//! Directory layout: `piece_{k}.txt` holding the full piece `Rₖ ∪ T`,
//! `skeleton.txt` holding `T` at full weight, and a `meta.txt` of
//! `key=value` lines.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use super::{Decomposition, SkeletonWeight, Source};
use crate::error::{Error, Result};
use crate::graph_core::{load_edge_list, write_edge_list, Edge, Indexing};

/// With [`SkeletonWeight::Discount`] the skeleton edges inside the piece
/// files carry weight `w / K`.
pub fn write_decomposition_dir(d: &Decomposition, dir: impl AsRef<Path>, weight: SkeletonWeight) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for k in 0..d.k() {
        write_edge_list(dir.join(format!("piece_{k}.txt")), d.node_count(), &d.piece_weighted(k, weight))?;
    }
    write_edge_list(dir.join("skeleton.txt"), d.node_count(), d.skeleton())?;
    let parts = d.parts().map_or_else(|| "none".to_string(), |p| p.to_string());
    let meta = format!(
        "k={}\nparts={parts}\nseed={}\nsource={}\nnodes={}\nskeleton_edges={}\nskeleton_weight={}\n",
        d.k(),
        d.seed(),
        d.source(),
        d.node_count(),
        d.skeleton().len(),
        match weight {
            SkeletonWeight::Verbatim => "verbatim",
            SkeletonWeight::Discount => "discount",
        }
    );
    let path = dir.join("meta.txt");
    fs::write(&path, meta).map_err(|e| Error::io(path, e))
}

pub fn read_decomposition_dir(dir: impl AsRef<Path>) -> Result<Decomposition> {
    let dir = dir.as_ref();
    let meta_path = dir.join("meta.txt");
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let mut meta = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: meta_path.clone(),
            line: i + 1,
            msg: format!("expected key=value, found {line:?}"),
        })?;
        meta.insert(key.trim().to_string(), value.trim().to_string());
    }
    let field = |key: &str| {
        meta.get(key)
            .ok_or_else(|| Error::Format(format!("{}: missing `{key}`", meta_path.display())))
    };
    let number = |key: &str| -> Result<u64> {
        field(key)?
            .parse()
            .map_err(|_| Error::Format(format!("{}: `{key}` is not an integer", meta_path.display())))
    };
    let k = number("k")? as usize;
    let nodes = number("nodes")? as usize;
    let seed = number("seed")?;
    let source: Source = field("source")?.parse()?;
    let parts = match field("parts")?.as_str() {
        "none" => None,
        _ => Some(number("parts")? as usize),
    };
    let load = |name: String| -> Result<Vec<Edge>> {
        let g = load_edge_list(dir.join(&name), Indexing::Zero)?;
        if g.node_count() != nodes {
            return Err(Error::Format(format!("{name}: node count differs from meta.txt")));
        }
        Ok(g.edges().to_vec())
    };
    let skeleton = load("skeleton.txt".to_string())?;
    let in_skeleton: HashSet<(usize, usize)> = skeleton.iter().map(Edge::key).collect();
    let residuals = (0..k)
        .map(|i| {
            let piece = load(format!("piece_{i}.txt"))?;
            Ok(piece.into_iter().filter(|e| !in_skeleton.contains(&e.key())).collect())
        })
        .collect::<Result<_>>()?;
    Ok(Decomposition::from_parts(nodes, residuals, skeleton, source, parts, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::connectivity_aware_decompose;
    use crate::graph_core::Graph;

    #[test]
    fn directory_round_trip() {
        let g = Graph::unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        let d = connectivity_aware_decompose(&g, 2, 3, 4).unwrap();
        let tmp = tempfile::tempdir().unwrap();
        for weight in [SkeletonWeight::Verbatim, SkeletonWeight::Discount] {
            write_decomposition_dir(&d, tmp.path(), weight).unwrap();
            assert!(tmp.path().join("skeleton.txt").exists());
            assert_eq!(read_decomposition_dir(tmp.path()).unwrap(), d);
        }
        let piece = crate::graph_core::load_edge_list(tmp.path().join("piece_0.txt"), Indexing::Zero).unwrap();
        assert_eq!(piece.edge_count(), d.piece(0).len());
    }

    #[test]
    fn missing_meta_field_is_format_error() {
        let tmp = tempfile::tempdir().unwrap();
        fs::write(tmp.path().join("meta.txt"), "k=1\n").unwrap();
        assert!(matches!(read_decomposition_dir(tmp.path()), Err(Error::Format(_))));
    }
}
