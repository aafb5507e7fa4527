//! Immutable undirected weighted graph in compressed row form.
//!
//! Every undirected edge `{i, j}` is stored twice, once in row `i` and once in
//! row `j`. A self-loop `(i, i, w)` is stored once and contributes `w` to the
//! degree of `i`. Column indices inside a row are strictly increasing.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// One input edge. Node ids are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Self { src, dst, weight }
    }

    pub fn unit(src: usize, dst: usize) -> Self {
        Self::new(src, dst, 1.0)
    }
}

impl From<(usize, usize)> for Edge {
    fn from((src, dst): (usize, usize)) -> Self {
        Edge::unit(src, dst)
    }
}

impl From<(usize, usize, f64)> for Edge {
    fn from((src, dst, weight): (usize, usize, f64)) -> Self {
        Edge::new(src, dst, weight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
}

/// Builds a graph whose node count is one more than the largest id seen.
pub fn build_graph<I, E>(edges: I) -> Result<Graph>
where
    I: IntoIterator<Item = E>,
    E: Into<Edge>,
{
    let edges: Vec<Edge> = edges.into_iter().map(Into::into).collect();
    let n = edges
        .iter()
        .map(|e| e.src.max(e.dst) + 1)
        .max()
        .unwrap_or(0);
    Graph::with_node_count(n, edges)
}

impl Graph {
    /// Builds a graph on exactly `n` nodes. Duplicate pairs are merged by
    /// summing their weights.
    pub fn with_node_count<I, E>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for edge in edges {
            let Edge { src, dst, weight } = edge.into();
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::Construction(format!(
                    "edge ({src}, {dst}) has invalid weight {weight}"
                )));
            }
            if src >= n || dst >= n {
                return Err(Error::Construction(format!(
                    "edge ({src}, {dst}) references a node outside 0..{n}"
                )));
            }
            if weight == 0.0 {
                continue;
            }
            entries.push((src, dst, weight));
            if src != dst {
                entries.push((dst, src, weight));
            }
        }
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(entries.len());
        let mut weights: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for &(row, col, w) in &entries {
            if last == Some((row, col)) {
                *weights
                    .last_mut()
                    .expect("merged entry follows a stored one") += w;
                continue;
            }
            last = Some((row, col));
            targets.push(col);
            weights.push(w);
            offsets[row + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }

        let degrees: Vec<f64> = (0..n)
            .map(|i| weights[offsets[i]..offsets[i + 1]].iter().sum())
            .collect();
        if let Some(node) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::Construction(format!("node {node} has zero degree")));
        }

        Ok(Graph {
            offsets,
            targets,
            weights,
            degrees,
        })
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    /// Number of stored undirected edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        let loops = (0..self.node_count())
            .filter(|&i| self.weight(i, i) > 0.0)
            .count();
        (self.targets.len() - loops) / 2 + loops
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn degree(&self, node: usize) -> f64 {
        self.degrees[node]
    }

    pub fn total_degree(&self) -> f64 {
        self.degrees.iter().sum()
    }

    /// Neighbours of `node` with their weights, in increasing id order.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// `A_ij`, zero when the pair is not stored.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let range = self.offsets[i]..self.offsets[i + 1];
        match self.targets[range.clone()].binary_search(&j) {
            Ok(pos) => self.weights[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn column_indices(&self) -> &[usize] {
        &self.targets
    }

    pub fn values(&self) -> &[f64] {
        &self.weights
    }

    /// `(P x)_i = (1 / d_i) Σ_j A_ij x_j`.
    pub fn transition_apply(&self, node: usize, x: &[f64]) -> f64 {
        let s: f64 = self.neighbors(node).map(|(j, w)| w * x[j]).sum();
        s / self.degrees[node]
    }

    /// Each undirected edge once, as `(i, j, w)` with `i <= j`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j >= i)
                .map(move |(j, w)| Edge::new(i, j, w))
        })
    }

    /// Subgraph induced by `nodes` (which must be distinct). Node `k` of the
    /// result is `nodes[k]` of `self`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let mut position = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            position[v] = k;
        }
        let edges = nodes.iter().enumerate().flat_map(|(k, &v)| {
            let position = &position;
            self.neighbors(v).filter_map(move |(u, w)| {
                let m = position[u];
                (m != usize::MAX && m >= k).then(|| Edge::new(k, m, w))
            })
        });
        Graph::with_node_count(nodes.len(), edges.collect::<Vec<_>>())
    }
}

/// Connected components of a graph with the number of seeds in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component index of every node.
    pub component_of: Vec<usize>,
    /// Members of each component in increasing id order.
    pub members: Vec<Vec<usize>>,
    pub seed_counts: Vec<usize>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the first component without any seed.
    pub fn first_seedless(&self) -> Option<usize> {
        self.seed_counts.iter().position(|&c| c == 0)
    }
}

pub fn connected_components_with_seeds(g: &Graph, seeds: &[usize]) -> Components {
    let n = g.node_count();
    let mut component_of = vec![usize::MAX; n];
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut nodes = vec![start];
        component_of[start] = id;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for (u, _) in g.neighbors(v) {
                if component_of[u] == usize::MAX {
                    component_of[u] = id;
                    nodes.push(u);
                    queue.push_back(u);
                }
            }
        }
        nodes.sort_unstable();
        members.push(nodes);
    }

    let mut seed_counts = vec![0; members.len()];
    let mut seen = vec![false; n];
    for &s in seeds {
        if s < n && !seen[s] {
            seen[s] = true;
            seed_counts[component_of[s]] += 1;
        }
    }
    Components {
        component_of,
        members,
        seed_counts,
    }
}
