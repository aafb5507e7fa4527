//! Stochastic block model sampling.
//!
//! Pairs are visited with geometric skips, so the cost is proportional to the
//! number of edges produced rather than to the number of node pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::labels::{Label, LabeledNodes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub sizes: Vec<usize>,
    /// Intra-block edge probability.
    pub p: f64,
    /// Inter-block edge probability.
    pub q: f64,
    pub seed: u64,
}

impl SbmParams {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Param(format!(
                "block sizes must be positive, got {:?}",
                self.sizes
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Param(format!(
                "p must lie in (0, 1], got {}",
                self.p
            )));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::Param(format!(
                "q must lie in [0, 1], got {}",
                self.q
            )));
        }
        Ok(())
    }
}

/// A sampled graph restricted to its non-isolated nodes.
#[derive(Debug, Clone)]
pub struct SbmGraph {
    pub graph: Graph,
    /// Ground truth: the block of every kept node.
    pub labels: LabeledNodes,
    /// Pre-removal index of every kept node.
    pub kept: Vec<usize>,
    pub isolated_removed: usize,
}

pub fn generate_sbm(params: &SbmParams) -> Result<SbmGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    generate_sbm_with(&params.sizes, params.p, params.q, &mut rng)
}

/// Number of trials skipped before the next success, for success
/// probability `p` in `(0, 1)`.
fn geometric_skip<R: Rng + ?Sized>(rng: &mut R, log_fail: f64) -> u64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let skip = (u.ln() / log_fail).floor();
    if skip >= u64::MAX as f64 {
        u64::MAX
    } else {
        skip as u64
    }
}

/// Calls `emit(k)` for each index `k` in `0..count` kept independently with
/// probability `prob`.
fn bernoulli_indices<R: Rng + ?Sized>(
    rng: &mut R,
    count: u64,
    prob: f64,
    mut emit: impl FnMut(u64),
) {
    if prob <= 0.0 || count == 0 {
        return;
    }
    if prob >= 1.0 {
        (0..count).for_each(emit);
        return;
    }
    let log_fail = (1.0 - prob).ln();
    let mut next = geometric_skip(rng, log_fail);
    while next < count {
        emit(next);
        next = next
            .saturating_add(1)
            .saturating_add(geometric_skip(rng, log_fail));
    }
}

/// `k`-th pair `(i, j)` with `i < j < m` in row-major upper-triangle order.
fn triangle_pair(k: u64) -> (u64, u64) {
    // j is the largest integer with j (j - 1) / 2 <= k
    let mut j = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).floor() as u64;
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

pub fn generate_sbm_with<R: Rng + ?Sized>(
    sizes: &[usize],
    p: f64,
    q: f64,
    rng: &mut R,
) -> Result<SbmGraph> {
    SbmParams {
        sizes: sizes.to_vec(),
        p,
        q,
        seed: 0,
    }
    .validate()?;

    let starts: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &n| {
            let s = *acc;
            *acc += n;
            Some(s)
        })
        .collect();
    let n: usize = sizes.iter().sum();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (a, (&size_a, &start_a)) in sizes.iter().zip(&starts).enumerate() {
        let m = size_a as u64;
        bernoulli_indices(rng, m * m.saturating_sub(1) / 2, p, |k| {
            let (i, j) = triangle_pair(k);
            edges.push((start_a + i as usize, start_a + j as usize));
        });
        for (&size_b, &start_b) in sizes.iter().zip(&starts).skip(a + 1) {
            let width = size_b as u64;
            bernoulli_indices(rng, m * width, q, |k| {
                edges.push((
                    start_a + (k / width) as usize,
                    start_b + (k % width) as usize,
                ));
            });
        }
    }

    let mut touched = vec![false; n];
    for &(i, j) in &edges {
        touched[i] = true;
        touched[j] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&i| touched[i]).collect();
    if kept.is_empty() {
        return Err(Error::Generation("every node is isolated".into()));
    }
    let mut position = vec![usize::MAX; n];
    for (k, &i) in kept.iter().enumerate() {
        position[i] = k;
    }
    let graph = Graph::with_node_count(
        kept.len(),
        edges
            .iter()
            .map(|&(i, j)| Edge::unit(position[i], position[j])),
    )?;

    let mut block = Vec::with_capacity(n);
    for (k, &size) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(k, size));
    }
    let labels = LabeledNodes::new(
        kept.iter()
            .map(|&i| Some(Label::from_index(block[i])))
            .collect(),
        sizes.len(),
    )?;
    Ok(SbmGraph {
        graph,
        labels,
        isolated_removed: n - kept.len(),
        kept,
    })
}
