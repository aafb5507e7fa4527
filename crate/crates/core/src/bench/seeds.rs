use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::LabeledNodes;

/// How many seeds to draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedRule {
    /// Exactly `counts[k]` seeds among the nodes of class `k + 1`.
    PerClass(Vec<usize>),
    /// `round(fraction · n)` seeds drawn uniformly over all labelled nodes,
    /// redrawn until every class has at least one seed.
    Fraction(f64),
}

pub const MAX_RESAMPLES: usize = 1000;

/// Draws a seed subset of the labelled nodes of `labels`.
pub fn sample_seeds<R: Rng + ?Sized>(
    labels: &LabeledNodes,
    rule: &SeedRule,
    rng: &mut R,
) -> Result<LabeledNodes> {
    let k = labels.num_labels();
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, l) in labels.iter() {
        by_class[l.index()].push(i);
    }
    if let Some(empty) = by_class.iter().position(Vec::is_empty) {
        return Err(Error::Sampling(format!("class {} has no nodes", empty + 1)));
    }
    let n = labels.node_count();

    match rule {
        SeedRule::PerClass(counts) => {
            if counts.len() != k {
                return Err(Error::Sampling(format!(
                    "{} per-class counts for {k} classes",
                    counts.len()
                )));
            }
            let mut chosen = Vec::new();
            for (class, (&count, nodes)) in counts.iter().zip(&by_class).enumerate() {
                if count == 0 || count > nodes.len() {
                    return Err(Error::Sampling(format!(
                        "class {} needs 1..={} seeds, asked for {count}",
                        class + 1,
                        nodes.len()
                    )));
                }
                chosen.extend(
                    index::sample(rng, nodes.len(), count)
                        .into_iter()
                        .map(|j| nodes[j]),
                );
            }
            if chosen.len() >= n {
                return Err(Error::Sampling("no free node would remain".into()));
            }
            chosen.sort_unstable();
            Ok(labels.restrict(&chosen))
        }
        SeedRule::Fraction(fraction) => {
            let pool = labels.nodes();
            if !(*fraction > 0.0 && *fraction < 1.0) {
                return Err(Error::Sampling(format!(
                    "seed fraction must lie in (0, 1), got {fraction}"
                )));
            }
            let count = (fraction * pool.len() as f64).round() as usize;
            if count < k || count >= n {
                return Err(Error::Sampling(format!(
                    "fraction {fraction} gives {count} seeds for {} labelled nodes and {k} classes",
                    pool.len()
                )));
            }
            for _ in 0..MAX_RESAMPLES {
                let mut chosen: Vec<usize> = index::sample(rng, pool.len(), count)
                    .into_iter()
                    .map(|j| pool[j])
                    .collect();
                chosen.sort_unstable();
                let seeds = labels.restrict(&chosen);
                if seeds.counts().iter().all(|&c| c > 0) {
                    return Ok(seeds);
                }
            }
            Err(Error::Sampling(format!(
                "no draw of {count} seeds covered every class in {MAX_RESAMPLES} attempts"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_blocks(n: usize) -> LabeledNodes {
        let values: Vec<u32> = (0..2 * n).map(|i| if i < n { 1 } else { 2 }).collect();
        LabeledNodes::complete(&values).unwrap()
    }

    #[test]
    fn per_class_counts_exact() {
        let labels = two_blocks(5000);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seeds = sample_seeds(&labels, &SeedRule::PerClass(vec![250, 250]), &mut rng).unwrap();
        assert_eq!(seeds.counts(), vec![250, 250]);
    }

    #[test]
    fn fraction_count() {
        let labels = two_blocks(5000);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let seeds = sample_seeds(&labels, &SeedRule::Fraction(0.05), &mut rng).unwrap();
        assert_eq!(seeds.len(), 500);
    }

    #[test]
    fn fraction_one_rejected() {
        let labels = two_blocks(10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            sample_seeds(&labels, &SeedRule::Fraction(1.0), &mut rng),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn too_many_per_class_rejected() {
        let labels = two_blocks(10);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(sample_seeds(&labels, &SeedRule::PerClass(vec![11, 1]), &mut rng).is_err());
        assert!(sample_seeds(&labels, &SeedRule::PerClass(vec![10, 10]), &mut rng).is_err());
        assert!(sample_seeds(&labels, &SeedRule::PerClass(vec![1]), &mut rng).is_err());
    }

    #[test]
    fn deterministic_given_rng() {
        let labels = two_blocks(100);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample_seeds(&labels, &SeedRule::Fraction(0.1), &mut rng).unwrap()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn fraction_guard_covers_rare_class() {
        let mut values = vec![1u32; 199];
        values.push(2);
        let labels = LabeledNodes::complete(&values).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seeds = sample_seeds(&labels, &SeedRule::Fraction(0.5), &mut rng).unwrap();
        assert!(seeds.counts()[1] == 1);
    }
}
