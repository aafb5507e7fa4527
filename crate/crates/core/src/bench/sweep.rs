//! Parameter sweeps and their `key = value` file format.
//!
//! ```text
//! # label asymmetry with two blocks
//! kind = label-ratio
//! blocks = 2
//! nodes = 10000
//! ratios = 1..10
//! seeds = 250
//! p = 0.01
//! q = 0.001
//! ```
//!
//! `kind = seed-ratio`: equal blocks of `nodes / blocks`; block 1 gets
//! `ratio · seeds` seeds and every other block `seeds`.
//!
//! `kind = label-ratio`: blocks 2..K share a size `m = round(nodes / (ratio + K − 1))`
//! and block 1 takes the remaining `nodes − (K − 1) m`; every block gets
//! `seeds` seeds.
//!
//! `kind = seed-fraction`: `fractions = 0.05, 0.1, 0.2` over a graph loaded
//! from files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::experiment::{DataSource, ExperimentSpec};
use super::seeds::SeedRule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    SeedRatio,
    LabelRatio,
    SeedFraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub blocks: usize,
    pub nodes: usize,
    pub ratios: Vec<u32>,
    /// Base seed count per block.
    pub seeds: usize,
    pub p: f64,
    pub q: f64,
    pub fractions: Vec<f64>,
}

impl SweepSpec {
    fn standard_sbm(kind: SweepKind, blocks: usize, seeds: usize) -> Self {
        Self {
            kind,
            blocks,
            nodes: 10_000,
            ratios: (1..=10).collect(),
            seeds,
            p: 1e-2,
            q: 1e-3,
            fractions: Vec::new(),
        }
    }

    /// Equal blocks over 10 000 nodes; 5% of every block but the first are
    /// seeds and the first block has `ratio` times as many.
    pub fn seed_asymmetry(blocks: usize) -> Self {
        Self::standard_sbm(SweepKind::SeedRatio, blocks, 10_000 / blocks / 20)
    }

    /// Uneven block sizes over 10 000 nodes with 500 seeds split equally.
    pub fn label_asymmetry(blocks: usize) -> Self {
        Self::standard_sbm(SweepKind::LabelRatio, blocks, 500 / blocks)
    }

    pub fn seed_fractions(fractions: Vec<f64>) -> Self {
        Self {
            kind: SweepKind::SeedFraction,
            blocks: 0,
            nodes: 0,
            ratios: Vec::new(),
            seeds: 0,
            p: 0.0,
            q: 0.0,
            fractions,
        }
    }

    /// Block sizes and seed counts for one ratio.
    pub fn layout(&self, ratio: u32) -> Result<(Vec<usize>, Vec<usize>)> {
        let k = self.blocks;
        if k < 2 {
            return Err(Error::Param(format!(
                "sweep needs at least 2 blocks, got {k}"
            )));
        }
        let r = ratio as usize;
        match self.kind {
            SweepKind::SeedRatio => {
                let size = self.nodes / k;
                let mut seeds = vec![self.seeds; k];
                seeds[0] = r * self.seeds;
                Ok((vec![size; k], seeds))
            }
            SweepKind::LabelRatio => {
                let m = (self.nodes as f64 / (r + k - 1) as f64).round() as usize;
                let first = self
                    .nodes
                    .checked_sub((k - 1) * m)
                    .ok_or_else(|| Error::Param("label ratio leaves no room for block 1".into()))?;
                let mut sizes = vec![m; k];
                sizes[0] = first;
                Ok((sizes, vec![self.seeds; k]))
            }
            SweepKind::SeedFraction => Err(Error::Param(
                "seed-fraction sweeps have no block layout".into(),
            )),
        }
    }

    /// One spec per sweep point, copying everything else from `template`.
    pub fn expand(&self, template: &ExperimentSpec) -> Result<Vec<ExperimentSpec>> {
        match self.kind {
            SweepKind::SeedFraction => {
                if !matches!(template.source, DataSource::Fixed { .. }) {
                    return Err(Error::Param(
                        "seed-fraction sweeps need a graph loaded from files".into(),
                    ));
                }
                if self.fractions.is_empty() {
                    return Err(Error::Param("sweep has no fractions".into()));
                }
                Ok(self
                    .fractions
                    .iter()
                    .map(|&f| ExperimentSpec {
                        point: format!("fraction={f}"),
                        parameter: Some(f),
                        seeds: SeedRule::Fraction(f),
                        ..template.clone()
                    })
                    .collect())
            }
            SweepKind::SeedRatio | SweepKind::LabelRatio => {
                if self.ratios.is_empty() {
                    return Err(Error::Param("sweep has no ratios".into()));
                }
                self.ratios
                    .iter()
                    .map(|&ratio| {
                        let (sizes, seeds) = self.layout(ratio)?;
                        Ok(ExperimentSpec {
                            point: format!("ratio={ratio}"),
                            parameter: Some(ratio as f64),
                            source: DataSource::Sbm {
                                sizes,
                                p: self.p,
                                q: self.q,
                            },
                            seeds: SeedRule::PerClass(seeds),
                            ..template.clone()
                        })
                    })
                    .collect()
            }
        }
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            source_name: source_name.to_string(),
            line,
            message,
        };
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(idx + 1, format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim().to_string();
            if entries
                .insert(key.clone(), (idx + 1, value.trim().to_string()))
                .is_some()
            {
                return Err(err(idx + 1, format!("duplicate key {key:?}")));
            }
        }

        let take = |entries: &mut BTreeMap<String, (usize, String)>, key: &str| entries.remove(key);
        fn parsed<T: std::str::FromStr>(
            source_name: &str,
            key: &str,
            entry: (usize, String),
        ) -> Result<T> {
            entry.1.parse().map_err(|_| Error::Parse {
                source_name: source_name.to_string(),
                line: entry.0,
                message: format!("invalid value {:?} for {key}", entry.1),
            })
        }

        let (kind_line, kind) =
            take(&mut entries, "kind").ok_or_else(|| err(0, "missing key `kind`".into()))?;
        let kind = match kind.as_str() {
            "seed-ratio" => SweepKind::SeedRatio,
            "label-ratio" => SweepKind::LabelRatio,
            "seed-fraction" => SweepKind::SeedFraction,
            other => return Err(err(kind_line, format!("unknown sweep kind {other:?}"))),
        };

        let spec = match kind {
            SweepKind::SeedFraction => {
                let (line, list) = take(&mut entries, "fractions")
                    .ok_or_else(|| err(0, "missing key `fractions`".into()))?;
                let fractions = list
                    .split(',')
                    .map(|f| {
                        f.trim()
                            .parse::<f64>()
                            .map_err(|_| err(line, format!("invalid fraction {f:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SweepSpec::seed_fractions(fractions)
            }
            _ => {
                let mut spec = SweepSpec::standard_sbm(kind, 2, 250);
                if let Some(e) = take(&mut entries, "blocks") {
                    spec.blocks = parsed(source_name, "blocks", e)?;
                }
                if let Some(e) = take(&mut entries, "nodes") {
                    spec.nodes = parsed(source_name, "nodes", e)?;
                }
                if let Some(e) = take(&mut entries, "seeds") {
                    spec.seeds = parsed(source_name, "seeds", e)?;
                }
                if let Some(e) = take(&mut entries, "p") {
                    spec.p = parsed(source_name, "p", e)?;
                }
                if let Some(e) = take(&mut entries, "q") {
                    spec.q = parsed(source_name, "q", e)?;
                }
                if let Some((line, list)) = take(&mut entries, "ratios") {
                    spec.ratios = parse_ratios(&list).ok_or_else(|| {
                        err(
                            line,
                            format!("invalid ratios {list:?}; use `a..b` or `a,b,c`"),
                        )
                    })?;
                }
                spec
            }
        };
        if let Some((key, (line, _))) = entries.into_iter().next() {
            return Err(err(line, format!("unknown key {key:?}")));
        }
        if spec.kind != SweepKind::SeedFraction {
            spec.layout(1)?;
        }
        Ok(spec)
    }
}

fn parse_ratios(text: &str) -> Option<Vec<u32>> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().ok()?;
        let b: u32 = b.trim().trim_start_matches('=').parse().ok()?;
        return (a >= 1 && a <= b).then(|| (a..=b).collect());
    }
    let values: Vec<u32> = text
        .split(',')
        .map(|v| v.trim().parse().ok())
        .collect::<Option<_>>()?;
    (!values.is_empty() && values.iter().all(|&v| v >= 1)).then_some(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_ratio_layout() {
        let s = SweepSpec::seed_asymmetry(2);
        assert_eq!(s.layout(3).unwrap(), (vec![5000, 5000], vec![750, 250]));
        let s = SweepSpec::seed_asymmetry(5);
        assert_eq!(
            s.layout(2).unwrap(),
            (vec![2000; 5], vec![200, 100, 100, 100, 100])
        );
    }

    #[test]
    fn label_ratio_layout() {
        let s = SweepSpec::label_asymmetry(2);
        assert_eq!(s.layout(1).unwrap(), (vec![5000, 5000], vec![250, 250]));
        assert_eq!(s.layout(3).unwrap(), (vec![7500, 2500], vec![250, 250]));
        let (sizes, _) = s.layout(10).unwrap();
        assert_eq!(sizes, vec![9091, 909]);
        let s = SweepSpec::label_asymmetry(5);
        let (sizes, seeds) = s.layout(10).unwrap();
        assert_eq!(sizes.iter().sum::<usize>(), 10_000);
        assert_eq!(sizes[1], 714);
        assert_eq!(seeds, vec![100; 5]);
    }

    #[test]
    fn parse_file() {
        let text = "# fig\nkind = label-ratio\nblocks=5\nratios = 1..4\nseeds = 100\np = 0.02\n";
        let s = SweepSpec::parse(text, "sweep.txt").unwrap();
        assert_eq!(s.kind, SweepKind::LabelRatio);
        assert_eq!(s.blocks, 5);
        assert_eq!(s.ratios, vec![1, 2, 3, 4]);
        assert_eq!(s.seeds, 100);
        assert_eq!(s.p, 0.02);
        assert_eq!(s.q, 1e-3);
        assert_eq!(s.nodes, 10_000);

        let s = SweepSpec::parse("kind=seed-ratio\nratios=1,5,10\n", "x").unwrap();
        assert_eq!(s.ratios, vec![1, 5, 10]);
        let s = SweepSpec::parse("kind=seed-fraction\nfractions=0.05, 0.1,0.2\n", "x").unwrap();
        assert_eq!(s.fractions, vec![0.05, 0.1, 0.2]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = SweepSpec::parse("kind = seed-ratio\nratio = 3\n", "s").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = SweepSpec::parse("kind = nope\n", "s").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = SweepSpec::parse("kind = seed-ratio\nratios = 3..1\n", "s").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(SweepSpec::parse("blocks = 2\n", "s").is_err());
        assert!(SweepSpec::parse("kind = seed-ratio\nkind = label-ratio\n", "s").is_err());
    }
}
