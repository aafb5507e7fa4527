//! Equilibrium temperatures under fixed boundary values.
//!
//! Free nodes satisfy Laplace's equation `(L T)_i = 0`, equivalently
//! `T_i = (P T)_i` with `P = D⁻¹A`, while seed nodes keep their prescribed
//! temperature. Two backends are available:
//!
//! * [`Method::FixedPoint`] iterates `T_free ← (P T)_free` from zero.
//! * [`Method::GroundedSolve`] runs diagonally preconditioned conjugate
//!   gradient on `(D_ff − A_ff) X = A_fs Y`.
//!
//! Both stop only once `max_i |T_i − (P T)_i| <= tolerance` over free nodes.

mod cg;
mod fixed_point;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components_with_seeds, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FixedPoint,
    #[default]
    GroundedSolve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::default(),
            tolerance: 1e-9,
            max_iterations: 100_000,
        }
    }
}

impl SolverConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Param(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Param("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Seed nodes and their fixed temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    seeds: Vec<usize>,
    values: Vec<f64>,
}

impl BoundaryCondition {
    pub fn new(seeds: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if seeds.len() != values.len() {
            return Err(Error::InvalidSeeds(format!(
                "{} seeds but {} values",
                seeds.len(),
                values.len()
            )));
        }
        if seeds.is_empty() {
            return Err(Error::InvalidSeeds("seed set is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSeeds(format!("non-finite seed value {v}")));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSeeds(format!("duplicate seed {}", w[0])));
        }
        Ok(Self { seeds, values })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let (seeds, values) = pairs.into_iter().unzip();
        Self::new(seeds, values)
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    fn seed_mask(&self, n: usize) -> Result<Vec<bool>> {
        let mut mask = vec![false; n];
        for &s in &self.seeds {
            if s >= n {
                return Err(Error::InvalidSeeds(format!("seed {s} outside 0..{n}")));
            }
            mask[s] = true;
        }
        if self.seeds.len() >= n {
            return Err(Error::InvalidSeeds(
                "every node is a seed; the seed set must be a strict subset".into(),
            ));
        }
        Ok(mask)
    }
}

/// Equilibrium temperatures of one Dirichlet problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureField {
    values: Vec<f64>,
    seed_mask: Vec<bool>,
    /// Achieved `max |T_i − (P T)_i|` over free nodes.
    pub residual: f64,
    /// The tolerance the solve was asked to meet.
    pub tolerance: f64,
    pub iterations: usize,
}

impl TemperatureField {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_seed(&self, node: usize) -> bool {
        self.seed_mask[node]
    }

    pub fn free_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.seed_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| (!s).then_some(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanOver {
    AllNodes,
    FreeNodes,
}

pub fn mean_temperature(t: &TemperatureField, over: MeanOver) -> Result<f64> {
    match over {
        MeanOver::AllNodes => {
            if t.values.is_empty() {
                return Err(Error::EmptySet);
            }
            Ok(t.values.iter().sum::<f64>() / t.values.len() as f64)
        }
        MeanOver::FreeNodes => {
            let (sum, count) = t
                .free_nodes()
                .fold((0.0, 0usize), |(s, c), i| (s + t.values[i], c + 1));
            if count == 0 {
                return Err(Error::EmptySet);
            }
            Ok(sum / count as f64)
        }
    }
}

/// `max |T_i − (P T)_i|` over nodes where `seed_mask` is false.
pub fn laplace_residual(g: &Graph, values: &[f64], seed_mask: &[bool]) -> f64 {
    (0..g.node_count())
        .filter(|&i| !seed_mask[i])
        .map(|i| (values[i] - g.transition_apply(i, values)).abs())
        .fold(0.0, f64::max)
}

pub fn solve_dirichlet(
    g: &Graph,
    bc: &BoundaryCondition,
    cfg: &SolverConfig,
) -> Result<TemperatureField> {
    solve_dirichlet_from(g, bc, cfg, None)
}

/// Like [`solve_dirichlet`], starting the free temperatures from `initial`
/// (a length-`n` vector whose seed entries are ignored) instead of zero.
pub fn solve_dirichlet_from(
    g: &Graph,
    bc: &BoundaryCondition,
    cfg: &SolverConfig,
    initial: Option<&[f64]>,
) -> Result<TemperatureField> {
    cfg.validate()?;
    let n = g.node_count();
    let seed_mask = bc.seed_mask(n)?;

    let components = connected_components_with_seeds(g, bc.seeds());
    if let Some(c) = components.first_seedless() {
        return Err(Error::SingularSystem {
            node: components.members[c][0],
        });
    }

    let mut values = match initial {
        Some(init) if init.len() == n => init.to_vec(),
        Some(init) => {
            return Err(Error::Param(format!(
                "initial guess has length {} for {n} nodes",
                init.len()
            )))
        }
        None => vec![0.0; n],
    };
    for (&s, &v) in bc.seeds().iter().zip(bc.values()) {
        values[s] = v;
    }

    let outcome = match cfg.method {
        Method::FixedPoint => fixed_point::solve(g, &seed_mask, values, cfg),
        Method::GroundedSolve => cg::solve(g, &seed_mask, values, cfg),
    };
    let field = TemperatureField {
        values: outcome.values,
        seed_mask,
        residual: outcome.residual,
        tolerance: cfg.tolerance,
        iterations: outcome.iterations,
    };
    if outcome.converged {
        Ok(field)
    } else {
        Err(Error::Convergence {
            iterations: field.iterations,
            residual: field.residual,
            best: Box::new(field),
        })
    }
}

struct Outcome {
    values: Vec<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
}
