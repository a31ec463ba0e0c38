//! Whitespace-separated edge lists: `src dst [weight]` per line, `#` comments.
//!
//! A comment of the form `# nodes: N` fixes the node count; otherwise it is
//! one more than the largest index seen.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::graph::{Edge, Graph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Indexing {
    #[default]
    Zero,
    One,
}

pub fn load_edge_list(path: impl AsRef<Path>, indexing: Indexing) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, indexing, path)
}

/// `origin` only labels error messages.
pub fn parse_edge_list(text: &str, indexing: Indexing, origin: &Path) -> Result<Graph> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let offset: i64 = match indexing {
        Indexing::Zero => 0,
        Indexing::One => 1,
    };

    let mut header_nodes: Option<usize> = None;
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix("nodes:") {
                let n = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad node count {:?}", count.trim())))?;
                header_nodes = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(
                lineno,
                format!("expected `src dst [weight]`, found {} fields", fields.len()),
            ));
        }
        let endpoint = |s: &str| -> Result<usize> {
            let v: i64 = s
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid node index {s:?}")))?;
            let shifted = v - offset;
            if shifted < 0 {
                return Err(Error::domain(format!(
                    "line {lineno}: negative node index {v}"
                )));
            }
            Ok(shifted as usize)
        };
        let a = endpoint(fields[0])?;
        let b = endpoint(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("invalid weight {s:?}")))?,
            None => 1.0,
        };
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::domain(format!(
                "line {lineno}: weight must be finite and positive, got {w}"
            )));
        }
        raw.push((lineno, a, b, w));
    }

    let inferred = raw.iter().map(|&(_, a, b, _)| a.max(b) + 1).max().unwrap_or(0);
    let n = match header_nodes {
        Some(h) if h < inferred => {
            return Err(Error::domain(format!(
                "header declares {h} nodes but index {} appears",
                inferred - 1
            )))
        }
        Some(h) => h,
        None => inferred,
    };

    let mut edges = Vec::with_capacity(raw.len());
    for (lineno, a, b, w) in raw {
        if a == b {
            log::warn!("{}:{lineno}: dropping self-loop on node {a}", origin.display());
            continue;
        }
        edges.push((a, b, w));
    }
    Graph::new(n, edges)
}

/// Writes `u v w` lines preceded by a `# nodes: N` header, so isolated
/// trailing nodes survive a round trip.
pub fn write_edge_list(path: impl AsRef<Path>, n: usize, edges: &[Edge]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(n, edges)).map_err(|e| Error::io(path, e))
}

pub fn format_edge_list(n: usize, edges: &[Edge]) -> String {
    let mut out = String::with_capacity(16 * edges.len() + 16);
    let _ = writeln!(out, "# nodes: {n}");
    for e in edges {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}
