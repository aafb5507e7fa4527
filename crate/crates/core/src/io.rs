//! Text formats.
//!
//! * Edge list: one edge per line, `src dst [weight]`, whitespace separated.
//!   Lines starting with `#` and blank lines are skipped. Ids are arbitrary
//!   non-negative integers and are compacted to `0..n` in increasing order.
//! * Label / seed file: lines `node label` with 1-based integer labels, ids
//!   in the same space as the edge list.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::labels::{Label, LabeledNodes};

/// Sorted original ids; position `k` holds the original id of node `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdMap {
    original: Vec<u64>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        Self {
            original: (0..n as u64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn original(&self, node: usize) -> u64 {
        self.original[node]
    }

    pub fn compact(&self, original: u64) -> Option<usize> {
        self.original.binary_search(&original).ok()
    }

    pub fn originals(&self) -> &[u64] {
        &self.original
    }
}

/// A graph read from an edge list together with its id compaction.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub ids: IdMap,
}

fn parse_error(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

fn content_lines<'a, R: BufRead + 'a>(
    reader: R,
    source_name: &'a str,
) -> impl Iterator<Item = Result<(usize, String)>> + 'a {
    reader
        .lines()
        .enumerate()
        .filter_map(move |(idx, line)| match line {
            Err(e) => Some(Err(parse_error(source_name, idx + 1, e.to_string()))),
            Ok(l) => {
                let trimmed = l.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((idx + 1, trimmed.to_string())))
                }
            }
        })
}

pub fn read_edge_list<R: Read>(reader: R, source_name: &str) -> Result<LoadedGraph> {
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    for item in content_lines(BufReader::new(reader), source_name) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_error(
                source_name,
                line,
                format!("expected `src dst [weight]`, got {} fields", fields.len()),
            ));
        }
        let id = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_error(source_name, line, format!("invalid node id {s:?}")))
        };
        let weight = match fields.get(2) {
            Some(w) => w
                .parse::<f64>()
                .ok()
                .filter(|w| w.is_finite() && *w >= 0.0)
                .ok_or_else(|| parse_error(source_name, line, format!("invalid weight {w:?}")))?,
            None => 1.0,
        };
        raw.push((id(fields[0])?, id(fields[1])?, weight));
    }
    if raw.is_empty() {
        return Err(parse_error(source_name, 0, "no edges"));
    }

    let mut original: Vec<u64> = raw.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    original.sort_unstable();
    original.dedup();
    let ids = IdMap { original };
    let edges: Vec<Edge> = raw
        .iter()
        .map(|&(a, b, w)| {
            Edge::new(
                ids.compact(a).expect("id collected above"),
                ids.compact(b).expect("id collected above"),
                w,
            )
        })
        .collect();
    let graph = Graph::with_node_count(ids.len(), edges)?;
    Ok(LoadedGraph { graph, ids })
}

/// Reads `node label` lines, mapping node ids through `ids`. `K` is the
/// largest label present.
pub fn read_labels<R: Read>(reader: R, source_name: &str, ids: &IdMap) -> Result<LabeledNodes> {
    let mut pairs = Vec::new();
    for item in content_lines(BufReader::new(reader), source_name) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(source_name, line, "expected `node label`"));
        }
        let node: u64 = fields[0].parse().map_err(|_| {
            parse_error(
                source_name,
                line,
                format!("invalid node id {:?}", fields[0]),
            )
        })?;
        let value: u32 = fields[1].parse().map_err(|_| {
            parse_error(source_name, line, format!("invalid label {:?}", fields[1]))
        })?;
        let label = Label::new(value).map_err(|e| parse_error(source_name, line, e.to_string()))?;
        let compact = ids.compact(node).ok_or_else(|| {
            parse_error(
                source_name,
                line,
                format!("node {node} is not in the graph"),
            )
        })?;
        pairs.push((line, compact, label));
    }
    let k = pairs.iter().map(|p| p.2.index() + 1).max().unwrap_or(0);
    let mut labels = vec![None; ids.len()];
    for (line, node, label) in pairs {
        match labels[node] {
            Some(prev) if prev != label => {
                return Err(parse_error(
                    source_name,
                    line,
                    format!(
                        "node {} relabelled from {prev} to {label}",
                        ids.original(node)
                    ),
                ))
            }
            _ => labels[node] = Some(label),
        }
    }
    LabeledNodes::new(labels, k)
}

pub fn load_edge_list(path: &Path) -> Result<LoadedGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(file, &path.display().to_string())
}

pub fn load_labels(path: &Path, ids: &IdMap) -> Result<LabeledNodes> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_labels(file, &path.display().to_string(), ids)
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
