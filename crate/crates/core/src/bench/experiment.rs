//! Repetition runner.
//!
//! Every repetition draws its graph (for SBM sources) and its seeds from two
//! random streams derived from `(master seed, point index, repetition)`, so a
//! report does not depend on how repetitions are scheduled across threads.
//! All centering modes of a repetition share the same graph, seeds and
//! Dirichlet solves.

use std::borrow::Cow;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{macro_f1_labels, F1Scores};
use super::sbm::generate_sbm_with;
use super::seeds::{sample_seeds, SeedRule};
use crate::classifier::{one_vs_all_fields, predict_from_fields, CenteringMode};
use crate::dirichlet::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{connected_components_with_seeds, Graph};
use crate::labels::{Label, LabeledNodes};

#[derive(Debug, Clone)]
pub enum DataSource {
    /// A fresh stochastic block model graph per repetition.
    Sbm { sizes: Vec<usize>, p: f64, q: f64 },
    /// One graph reused by every repetition.
    Fixed {
        name: String,
        graph: Arc<Graph>,
        labels: Arc<LabeledNodes>,
    },
}

impl DataSource {
    pub fn describe(&self) -> String {
        match self {
            DataSource::Sbm { sizes, p, q } => format!("sbm sizes={sizes:?} p={p} q={q}"),
            DataSource::Fixed { name, graph, .. } => {
                format!(
                    "{name} ({} nodes, {} edges)",
                    graph.node_count(),
                    graph.edge_count()
                )
            }
        }
    }
}

/// One configuration point of an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Name of the configuration point, e.g. `ratio=3`.
    pub point: String,
    /// Swept parameter value, if any.
    pub parameter: Option<f64>,
    pub source: DataSource,
    pub seeds: SeedRule,
    pub modes: Vec<CenteringMode>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub solver: SolverConfig,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Param("repetitions must be at least 1".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::Param("no centering mode selected".into()));
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallClock {
    pub mean_seconds: f64,
    pub std_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    /// Mean over repetitions of the total CG / fixed-point iterations.
    pub mean_iterations: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: CenteringMode,
    pub runs: usize,
    pub macro_f1_mean: f64,
    /// Population standard deviation over repetitions.
    pub macro_f1_std: f64,
    pub per_class_f1_mean: Vec<f64>,
    pub macro_f1_runs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: String,
    pub parameter: Option<f64>,
    pub source: String,
    pub seed_rule: SeedRule,
    pub repetitions: usize,
    pub isolated_removed_mean: f64,
    /// Free nodes lying in components without any seed; they receive no
    /// prediction and count as misses.
    pub unseeded_free_mean: f64,
    pub solver: SolverSummary,
    pub modes: Vec<ModeSummary>,
    pub timing: Option<WallClock>,
}

impl PointReport {
    pub fn mode(&self, mode: CenteringMode) -> Option<&ModeSummary> {
        self.modes.iter().find(|m| m.mode == mode)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub master_seed: u64,
    pub std_convention: String,
    pub notes: Vec<String>,
    pub points: Vec<PointReport>,
}

impl ExperimentReport {
    /// The report with wall-clock figures removed; everything left is a
    /// deterministic function of the experiment specs.
    pub fn without_timing(&self) -> Self {
        let mut copy = self.clone();
        for p in &mut copy.points {
            p.timing = None;
        }
        copy
    }
}

const GRAPH_STREAM: u64 = 0;
const SEED_STREAM: u64 = 1;

/// Independent random stream for one purpose of one repetition.
pub fn stream_rng(master_seed: u64, point: usize, repetition: usize, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << 40) ^ ((repetition as u64) << 8) ^ purpose);
    rng
}

/// Predictions of every mode over the components that contain a seed.
#[derive(Debug, Clone)]
pub struct ReachableClassification {
    /// One length-`n` vector per mode; seeds and unseeded nodes are `None`.
    pub predictions: Vec<Vec<Option<Label>>>,
    /// Free nodes in components without a seed.
    pub unseeded_free: usize,
    pub iterations: usize,
    pub max_residual: f64,
}

/// Classifies the nodes whose component holds at least one seed, leaving
/// nodes of seedless components unlabelled.
pub fn classify_reachable(
    g: &Graph,
    seeds: &LabeledNodes,
    modes: &[CenteringMode],
    cfg: &SolverConfig,
) -> Result<ReachableClassification> {
    let n = g.node_count();
    let components = connected_components_with_seeds(g, &seeds.nodes());
    let reachable: Vec<usize> = components
        .members
        .iter()
        .zip(&components.seed_counts)
        .filter(|(_, &c)| c > 0)
        .flat_map(|(m, _)| m.iter().copied())
        .collect();
    let unseeded_free = n - reachable.len();

    let (sub_graph, sub_seeds, back): (Cow<Graph>, Cow<LabeledNodes>, Option<Vec<usize>>) =
        if unseeded_free == 0 {
            (Cow::Borrowed(g), Cow::Borrowed(seeds), None)
        } else {
            let mut nodes = reachable;
            nodes.sort_unstable();
            (
                Cow::Owned(g.induced_subgraph(&nodes)?),
                Cow::Owned(seeds.select(&nodes)),
                Some(nodes),
            )
        };

    let fields = one_vs_all_fields(&sub_graph, &sub_seeds, cfg)?;
    let iterations = fields.iter().map(|f| f.iterations).sum();
    let max_residual = fields.iter().map(|f| f.residual).fold(0.0, f64::max);
    let predictions = modes
        .iter()
        .map(|&mode| {
            let pred = predict_from_fields(&fields, &sub_seeds, mode)?;
            Ok(match &back {
                None => pred.as_slice().to_vec(),
                Some(nodes) => {
                    let mut full = vec![None; n];
                    for (k, &v) in nodes.iter().enumerate() {
                        full[v] = pred.get(k);
                    }
                    full
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReachableClassification {
        predictions,
        unseeded_free,
        iterations,
        max_residual,
    })
}

struct RepetitionOutcome {
    scores: Vec<F1Scores>,
    isolated_removed: usize,
    unseeded_free: usize,
    iterations: usize,
    max_residual: f64,
    seconds: f64,
}

fn run_repetition(
    spec: &ExperimentSpec,
    point: usize,
    repetition: usize,
) -> Result<RepetitionOutcome> {
    let start = Instant::now();
    let (graph, truth, isolated_removed): (Cow<Graph>, Cow<LabeledNodes>, usize) =
        match &spec.source {
            DataSource::Sbm { sizes, p, q } => {
                let mut rng = stream_rng(spec.master_seed, point, repetition, GRAPH_STREAM);
                let sbm = generate_sbm_with(sizes, *p, *q, &mut rng)?;
                (
                    Cow::Owned(sbm.graph),
                    Cow::Owned(sbm.labels),
                    sbm.isolated_removed,
                )
            }
            DataSource::Fixed { graph, labels, .. } => {
                (Cow::Borrowed(&**graph), Cow::Borrowed(&**labels), 0)
            }
        };
    let mut rng = stream_rng(spec.master_seed, point, repetition, SEED_STREAM);
    let seeds = sample_seeds(&truth, &spec.seeds, &mut rng)?;
    let free_truth = truth.without(&seeds);
    let outcome = classify_reachable(&graph, &seeds, &spec.modes, &spec.solver)?;
    let scores = outcome
        .predictions
        .iter()
        .map(|pred| macro_f1_labels(&free_truth, pred))
        .collect::<Result<Vec<_>>>()?;
    Ok(RepetitionOutcome {
        scores,
        isolated_removed,
        unseeded_free: outcome.unseeded_free,
        iterations: outcome.iterations,
        max_residual: outcome.max_residual,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn summarize(spec: &ExperimentSpec, outcomes: &[RepetitionOutcome]) -> PointReport {
    let modes = spec
        .modes
        .iter()
        .enumerate()
        .map(|(m, &mode)| {
            let runs: Vec<f64> = outcomes.iter().map(|o| o.scores[m].macro_f1).collect();
            let (mean, std) = mean_std(&runs);
            let k = outcomes
                .iter()
                .map(|o| o.scores[m].per_class.len())
                .max()
                .unwrap_or(0);
            let per_class_f1_mean = (0..k)
                .map(|c| {
                    let vals: Vec<f64> = outcomes
                        .iter()
                        .map(|o| o.scores[m].per_class.get(c).copied().unwrap_or(0.0))
                        .collect();
                    mean_std(&vals).0
                })
                .collect();
            ModeSummary {
                mode,
                runs: runs.len(),
                macro_f1_mean: mean,
                macro_f1_std: std,
                per_class_f1_mean,
                macro_f1_runs: runs,
            }
        })
        .collect();
    let reps = outcomes.len() as f64;
    let seconds: Vec<f64> = outcomes.iter().map(|o| o.seconds).collect();
    let (mean_seconds, std_seconds) = mean_std(&seconds);
    PointReport {
        point: spec.point.clone(),
        parameter: spec.parameter,
        source: spec.source.describe(),
        seed_rule: spec.seeds.clone(),
        repetitions: outcomes.len(),
        isolated_removed_mean: outcomes
            .iter()
            .map(|o| o.isolated_removed as f64)
            .sum::<f64>()
            / reps,
        unseeded_free_mean: outcomes.iter().map(|o| o.unseeded_free as f64).sum::<f64>() / reps,
        solver: SolverSummary {
            mean_iterations: outcomes.iter().map(|o| o.iterations as f64).sum::<f64>() / reps,
            max_residual: outcomes.iter().map(|o| o.max_residual).fold(0.0, f64::max),
        },
        modes,
        timing: Some(WallClock {
            mean_seconds,
            std_seconds,
        }),
    }
}

/// Runs every configuration point; repetitions execute on the current rayon
/// pool.
pub fn run_sweep(specs: &[ExperimentSpec]) -> Result<ExperimentReport> {
    for spec in specs {
        spec.validate()?;
    }
    let tasks: Vec<(usize, usize)> = specs
        .iter()
        .enumerate()
        .flat_map(|(p, s)| (0..s.repetitions).map(move |r| (p, r)))
        .collect();
    let mut outcomes: Vec<Vec<RepetitionOutcome>> = specs.iter().map(|_| Vec::new()).collect();
    let results: Vec<Result<RepetitionOutcome>> = tasks
        .par_iter()
        .map(|&(p, r)| {
            run_repetition(&specs[p], p, r).map_err(|e| Error::Repetition {
                repetition: r,
                source: Box::new(e),
            })
        })
        .collect();
    for (&(p, _), result) in tasks.iter().zip(results) {
        outcomes[p].push(result?);
    }

    let mut notes = Vec::new();
    if specs
        .iter()
        .any(|s| matches!(s.seeds, SeedRule::Fraction(_)))
    {
        notes.push(
            "fraction seed rule: seeds drawn uniformly over all labelled nodes, \
             redrawn until every class has at least one seed"
                .to_string(),
        );
    }
    Ok(ExperimentReport {
        master_seed: specs.first().map_or(0, |s| s.master_seed),
        std_convention: "population".into(),
        notes,
        points: specs
            .iter()
            .zip(&outcomes)
            .map(|(s, o)| summarize(s, o))
            .collect(),
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    run_sweep(std::slice::from_ref(spec))
}
