//! Deterministic block model and its closed-form equilibrium temperatures.
//!
//! The graph is complete: weight `p` between two nodes of the same block
//! (a node and itself included), weight `q` across blocks. A node of block
//! `k` therefore has degree `n_k (p − q) + n q`. Block `k` occupies a
//! contiguous id range and its first `s_k` nodes are the seeds, labelled
//! `k + 1`.
//!
//! Block indices in this module are 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::labels::{Label, LabeledNodes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockModelParams {
    pub sizes: Vec<usize>,
    pub seed_counts: Vec<usize>,
    pub p: f64,
    pub q: f64,
}

impl BlockModelParams {
    pub fn new(sizes: Vec<usize>, seed_counts: Vec<usize>, p: f64, q: f64) -> Result<Self> {
        let params = Self {
            sizes,
            seed_counts,
            p,
            q,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() < 2 {
            return Err(Error::Param(format!(
                "need at least 2 blocks, got {}",
                self.sizes.len()
            )));
        }
        if self.sizes.len() != self.seed_counts.len() {
            return Err(Error::Param(format!(
                "{} block sizes but {} seed counts",
                self.sizes.len(),
                self.seed_counts.len()
            )));
        }
        for (k, (&n, &s)) in self.sizes.iter().zip(&self.seed_counts).enumerate() {
            if s == 0 || s > n {
                return Err(Error::Param(format!(
                    "block {}: need 1 <= seeds <= size, got seeds={s} size={n}",
                    k + 1
                )));
            }
        }
        if self.total_seeds() >= self.node_count() {
            return Err(Error::Param("no free node: every node is a seed".into()));
        }
        for (name, w) in [("p", self.p), ("q", self.q)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Param(format!("{name} must be positive, got {w}")));
            }
        }
        Ok(())
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn node_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn total_seeds(&self) -> usize {
        self.seed_counts.iter().sum()
    }

    /// First node id of every block.
    pub fn block_starts(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .scan(0, |acc, &n| {
                let start = *acc;
                *acc += n;
                Some(start)
            })
            .collect()
    }

    /// Block index of every node.
    pub fn block_of_nodes(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| std::iter::repeat_n(k, n))
            .collect()
    }

    pub fn is_seed(&self, node: usize) -> bool {
        let mut start = 0;
        for (&n, &s) in self.sizes.iter().zip(&self.seed_counts) {
            if node < start + n {
                return node - start < s;
            }
            start += n;
        }
        false
    }

    pub fn has_free_nodes(&self, block: usize) -> bool {
        self.sizes[block] > self.seed_counts[block]
    }

    /// Seed nodes with their block labels.
    pub fn seed_labels(&self) -> LabeledNodes {
        let labels = self
            .block_of_nodes()
            .into_iter()
            .enumerate()
            .map(|(i, k)| self.is_seed(i).then(|| Label::from_index(k)))
            .collect();
        LabeledNodes::new(labels, self.num_blocks()).expect("block labels are in range")
    }

    /// Every node labelled by its block.
    pub fn truth_labels(&self) -> LabeledNodes {
        let labels = self
            .block_of_nodes()
            .into_iter()
            .map(|k| Some(Label::from_index(k)))
            .collect();
        LabeledNodes::new(labels, self.num_blocks()).expect("block labels are in range")
    }

    /// `n_k (p − q) + n q`, the degree of any block-`k` node.
    pub fn degree(&self, block: usize) -> f64 {
        self.sizes[block] as f64 * (self.p - self.q) + self.node_count() as f64 * self.q
    }
}

pub fn build_block_graph(params: &BlockModelParams) -> Result<Graph> {
    params.validate()?;
    let n = params.node_count();
    let block = params.block_of_nodes();
    let mut edges = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let w = if block[i] == block[j] {
                params.p
            } else {
                params.q
            };
            edges.push(Edge::new(i, j, w));
        }
    }
    Graph::with_node_count(n, edges)
}

/// Per-block equilibrium temperatures of free nodes when the seeds of
/// `hot_block` are at 1 and all other seeds at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub hot_block: usize,
    pub block_temperatures: Vec<f64>,
    /// Mean temperature over all `n` nodes.
    pub mean: f64,
    /// `Σ_j (n_j − s_j) T_j`.
    pub free_heat: f64,
}

impl ClosedFormSolution {
    /// `T_k − T̄` for every block.
    pub fn deviations(&self) -> Vec<f64> {
        self.block_temperatures
            .iter()
            .map(|t| t - self.mean)
            .collect()
    }
}

fn nonzero(value: f64, scale: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if value.abs() <= 1e-14 * scale.abs().max(f64::MIN_POSITIVE) || !value.is_finite() {
        return Err(Error::DegenerateParams(what()));
    }
    Ok(value)
}

pub fn closed_form(params: &BlockModelParams, hot_block: usize) -> Result<ClosedFormSolution> {
    params.validate()?;
    let k_blocks = params.num_blocks();
    if hot_block >= k_blocks {
        return Err(Error::Param(format!(
            "hot block {} outside 1..={k_blocks}",
            hot_block + 1
        )));
    }
    let n = params.node_count() as f64;
    let (p, q) = (params.p, params.q);
    let gap = p - q;

    // s_k (p − q) + n q for every block.
    let denominators = params
        .seed_counts
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let s = s as f64;
            nonzero(s * gap + n * q, s * p.abs() + n * q, || {
                format!("s_{} (p - q) + n q vanishes", k + 1)
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let s_hot = params.seed_counts[hot_block] as f64;
    let n_hot = params.sizes[hot_block] as f64;
    let numerator = s_hot / n * (n_hot * gap + n * q) / denominators[hot_block];
    let coupling: f64 = params
        .sizes
        .iter()
        .zip(&params.seed_counts)
        .zip(&denominators)
        .map(|((&nk, &sk), d)| (nk - sk) as f64 * q / d)
        .sum();
    let denom = nonzero(1.0 - coupling, 1.0 + coupling.abs(), || {
        "mean-temperature denominator vanishes".into()
    })?;
    let mean = numerator / denom;

    let block_temperatures: Vec<f64> = (0..k_blocks)
        .map(|k| {
            let source = if k == hot_block { s_hot * gap } else { 0.0 };
            (source + n * mean * q) / denominators[k]
        })
        .collect();
    let free_heat = params
        .sizes
        .iter()
        .zip(&params.seed_counts)
        .zip(&block_temperatures)
        .map(|((&nk, &sk), t)| (nk - sk) as f64 * t)
        .sum();
    Ok(ClosedFormSolution {
        hot_block,
        block_temperatures,
        mean,
        free_heat,
    })
}

/// Why centered classification does not recover the blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Block whose free nodes are not assigned their own label.
    pub block: usize,
    /// The block label they receive (smallest index among the maximisers).
    pub assigned: usize,
    /// True when several labels attain the maximum.
    pub tie: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Consistency {
    Consistent,
    Inconsistent(Witness),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

/// Closed-form solutions for every hot block, indexed by hot block.
pub fn all_closed_forms(params: &BlockModelParams) -> Result<Vec<ClosedFormSolution>> {
    (0..params.num_blocks())
        .map(|l| closed_form(params, l))
        .collect()
}

/// Argmax over hot blocks of `score(solution, block)` for every block with
/// free nodes; reports the first block that is not assigned to itself.
fn assignment_check(
    params: &BlockModelParams,
    solutions: &[ClosedFormSolution],
    score: impl Fn(&ClosedFormSolution, usize) -> f64,
) -> Consistency {
    for block in (0..params.num_blocks()).filter(|&k| params.has_free_nodes(k)) {
        let scores: Vec<f64> = solutions.iter().map(|s| score(s, block)).collect();
        let mut best = 0;
        for l in 1..scores.len() {
            if scores[l] > scores[best] {
                best = l;
            }
        }
        let tie = scores
            .iter()
            .enumerate()
            .any(|(l, &v)| l != best && v == scores[best]);
        if best != block || tie {
            return Consistency::Inconsistent(Witness {
                block,
                assigned: best,
                tie,
            });
        }
    }
    Consistency::Consistent
}

/// Does centering by the all-node mean recover every block?
pub fn consistency_check(params: &BlockModelParams) -> Result<Consistency> {
    let solutions = all_closed_forms(params)?;
    Ok(assignment_check(params, &solutions, |s, k| {
        s.block_temperatures[k] - s.mean
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum UncenteredOutcome {
    Correct,
    /// Free nodes of `block` are at least as hot in the problem where
    /// `confused_with` is the hot block as in their own.
    Fails {
        block: usize,
        confused_with: usize,
    },
}

impl UncenteredOutcome {
    pub fn is_correct(&self) -> bool {
        matches!(self, UncenteredOutcome::Correct)
    }
}

/// Do raw temperatures recover every block? Free nodes of block `l` are
/// correctly classified iff their temperature in problem `l` is strictly
/// above their temperature in every other problem.
pub fn uncentered_failure_check(params: &BlockModelParams) -> Result<UncenteredOutcome> {
    let solutions = all_closed_forms(params)?;
    for block in (0..params.num_blocks()).filter(|&k| params.has_free_nodes(k)) {
        let own = solutions[block].block_temperatures[block];
        if let Some(other) = (0..params.num_blocks())
            .find(|&l| l != block && solutions[l].block_temperatures[block] >= own)
        {
            return Ok(UncenteredOutcome::Fails {
                block,
                confused_with: other,
            });
        }
    }
    Ok(UncenteredOutcome::Correct)
}
