//! One-against-all diffusion classifier.
//!
//! For every label `k` the seeds of `k` are held at temperature 1 and every
//! other seed at 0. The equilibrium temperatures are then centered (or not,
//! depending on [`CenteringMode`]) and each free node takes the label with the
//! largest centered temperature. Scores within the solve tolerance of the
//! maximum count as tied, and ties go to the smallest label.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{
    mean_temperature, solve_dirichlet, BoundaryCondition, MeanOver, SolverConfig, TemperatureField,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labels::{Label, LabeledNodes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenteringMode {
    /// Raw temperatures.
    None,
    /// Subtract the mean temperature over all nodes, seeds included.
    AllNodes,
    /// Subtract the mean temperature over free nodes only.
    FreeNodes,
}

impl CenteringMode {
    pub const ALL: [CenteringMode; 3] = [
        CenteringMode::None,
        CenteringMode::AllNodes,
        CenteringMode::FreeNodes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CenteringMode::None => "none",
            CenteringMode::AllNodes => "all",
            CenteringMode::FreeNodes => "free",
        }
    }

    fn offset(self, t: &TemperatureField) -> Result<f64> {
        match self {
            CenteringMode::None => Ok(0.0),
            CenteringMode::AllNodes => mean_temperature(t, MeanOver::AllNodes),
            CenteringMode::FreeNodes => mean_temperature(t, MeanOver::FreeNodes),
        }
    }
}

impl fmt::Display for CenteringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CenteringMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(CenteringMode::None),
            "all" | "all-nodes" => Ok(CenteringMode::AllNodes),
            "free" | "free-nodes" => Ok(CenteringMode::FreeNodes),
            other => Err(Error::Param(format!("unknown centering mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// The label whose seeds were hot.
    pub label: Label,
    pub residual: f64,
    pub iterations: usize,
    /// The value subtracted from the raw temperatures.
    pub offset: f64,
}

/// Centered temperatures, one column per label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    columns: Vec<Vec<f64>>,
    tie_tolerance: f64,
    pub diagnostics: Vec<SolveDiagnostics>,
}

impl ScoreMatrix {
    pub fn num_labels(&self) -> usize {
        self.columns.len()
    }

    pub fn node_count(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn get(&self, node: usize, label: Label) -> f64 {
        self.columns[label.index()][node]
    }

    pub fn column(&self, label: Label) -> &[f64] {
        &self.columns[label.index()]
    }

    pub fn row(&self, node: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[node]).collect()
    }

    /// Scores this close to the maximum are tied with it.
    pub fn tie_tolerance(&self) -> f64 {
        self.tie_tolerance
    }

    /// Smallest label whose score is within the tie tolerance of the maximum
    /// at `node`.
    pub fn argmax(&self, node: usize) -> Label {
        let max = self
            .columns
            .iter()
            .map(|c| c[node])
            .fold(f64::NEG_INFINITY, f64::max);
        let best = self
            .columns
            .iter()
            .position(|c| c[node] >= max - self.tie_tolerance)
            .unwrap_or(0);
        Label::from_index(best)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    labels: Vec<Option<Label>>,
    pub scores: ScoreMatrix,
}

impl Prediction {
    /// Predicted label of a free node; `None` for seeds.
    pub fn get(&self, node: usize) -> Option<Label> {
        self.labels.get(node).copied().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|l| (i, l)))
    }

    pub fn len(&self) -> usize {
        self.labels.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_slice(&self) -> &[Option<Label>] {
        &self.labels
    }

    pub fn to_labeled_nodes(&self) -> LabeledNodes {
        LabeledNodes::new(self.labels.clone(), self.scores.num_labels())
            .expect("predicted labels lie in 1..=K")
    }
}

fn check_seeds(g: &Graph, seeds: &LabeledNodes) -> Result<()> {
    if seeds.node_count() != g.node_count() {
        return Err(Error::InvalidSeeds(format!(
            "seed map covers {} nodes, graph has {}",
            seeds.node_count(),
            g.node_count()
        )));
    }
    if seeds.num_labels() < 2 {
        return Err(Error::InvalidSeeds(format!(
            "need at least 2 labels, got {}",
            seeds.num_labels()
        )));
    }
    if let Some(k) = seeds.counts().iter().position(|&c| c == 0) {
        return Err(Error::InvalidSeeds(format!(
            "label {} has no seed",
            Label::from_index(k)
        )));
    }
    Ok(())
}

fn hot_boundary(seeds: &LabeledNodes, hot: Label) -> Result<BoundaryCondition> {
    BoundaryCondition::from_pairs(
        seeds
            .iter()
            .map(|(i, l)| (i, if l == hot { 1.0 } else { 0.0 })),
    )
}

/// Solves the `K` one-against-all Dirichlet problems. Field `k` has the seeds
/// of label `k + 1` hot.
pub fn one_vs_all_fields(
    g: &Graph,
    seeds: &LabeledNodes,
    cfg: &SolverConfig,
) -> Result<Vec<TemperatureField>> {
    check_seeds(g, seeds)?;
    (0..seeds.num_labels())
        .into_par_iter()
        .map(|k| {
            let bc = hot_boundary(seeds, Label::from_index(k))?;
            solve_dirichlet(g, &bc, cfg)
        })
        .collect()
}

/// Centers precomputed one-against-all fields and assigns labels.
pub fn predict_from_fields(
    fields: &[TemperatureField],
    seeds: &LabeledNodes,
    mode: CenteringMode,
) -> Result<Prediction> {
    let mut columns = Vec::with_capacity(fields.len());
    let mut diagnostics = Vec::with_capacity(fields.len());
    for (k, t) in fields.iter().enumerate() {
        let offset = mode.offset(t)?;
        columns.push(t.values().iter().map(|v| v - offset).collect::<Vec<_>>());
        diagnostics.push(SolveDiagnostics {
            label: Label::from_index(k),
            residual: t.residual,
            iterations: t.iterations,
            offset,
        });
    }
    let scores = ScoreMatrix {
        columns,
        tie_tolerance: fields.iter().map(|t| t.tolerance).fold(0.0, f64::max),
        diagnostics,
    };
    let labels = (0..scores.node_count())
        .map(|i| seeds.get(i).is_none().then(|| scores.argmax(i)))
        .collect();
    Ok(Prediction { labels, scores })
}

pub fn classify(
    g: &Graph,
    seeds: &LabeledNodes,
    mode: CenteringMode,
    cfg: &SolverConfig,
) -> Result<Prediction> {
    let fields = one_vs_all_fields(g, seeds, cfg)?;
    predict_from_fields(&fields, seeds, mode)
}

/// Runs several centering modes over one set of Dirichlet solves.
pub fn classify_modes(
    g: &Graph,
    seeds: &LabeledNodes,
    modes: &[CenteringMode],
    cfg: &SolverConfig,
) -> Result<Vec<Prediction>> {
    let fields = one_vs_all_fields(g, seeds, cfg)?;
    modes
        .iter()
        .map(|&mode| predict_from_fields(&fields, seeds, mode))
        .collect()
}

/// Two-label rule with a single Dirichlet problem: seeds of label 2 at 1,
/// seeds of label 1 at 0, and a free node gets label 2 iff its temperature
/// is above the threshold (1/2 without centering, otherwise the mean
/// temperature of the selected node set). The score columns are `θ − T` and
/// `T − θ` and labels come from the same tie-aware argmax as [`classify`].
pub fn classify_binary(
    g: &Graph,
    seeds: &LabeledNodes,
    mode: CenteringMode,
    cfg: &SolverConfig,
) -> Result<Prediction> {
    if seeds.num_labels() != 2 {
        return Err(Error::InvalidSeeds(format!(
            "binary classification needs exactly 2 labels, got {}",
            seeds.num_labels()
        )));
    }
    check_seeds(g, seeds)?;
    let second = Label::from_index(1);
    let t = solve_dirichlet(g, &hot_boundary(seeds, second)?, cfg)?;
    let threshold = match mode {
        CenteringMode::None => 0.5,
        other => other.offset(&t)?,
    };

    let high: Vec<f64> = t.values().iter().map(|v| v - threshold).collect();
    let low: Vec<f64> = high.iter().map(|v| -v).collect();
    let scores = ScoreMatrix {
        columns: vec![low, high],
        tie_tolerance: t.tolerance,
        diagnostics: vec![SolveDiagnostics {
            label: second,
            residual: t.residual,
            iterations: t.iterations,
            offset: threshold,
        }],
    };
    let labels = (0..scores.node_count())
        .map(|i| seeds.get(i).is_none().then(|| scores.argmax(i)))
        .collect();
    Ok(Prediction { labels, scores })
}
