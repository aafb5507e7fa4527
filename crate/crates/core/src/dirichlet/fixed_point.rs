use super::{laplace_residual, Outcome};
use crate::dirichlet::SolverConfig;
use crate::graph::Graph;

/// Jacobi sweeps `T_free ← (P T)_free`.
///
/// The change produced by a sweep equals the residual of the iterate it was
/// applied to, and since `P` is row-stochastic the residual of the new iterate
/// is bounded by that change. Once the change is within tolerance the sweeps
/// continue until the error estimate `change · ρ / (1 − ρ)` is too, with `ρ`
/// the ratio of the last two changes. The very first sweep has no ratio and
/// stops on the change alone, so a converged start costs one sweep.
pub(super) fn solve(
    g: &Graph,
    seed_mask: &[bool],
    mut values: Vec<f64>,
    cfg: &SolverConfig,
) -> Outcome {
    let free: Vec<usize> = (0..g.node_count()).filter(|&i| !seed_mask[i]).collect();
    let mut next = vec![0.0; free.len()];
    let mut iterations = 0;
    let mut previous: Option<f64> = None;
    loop {
        let mut change = 0.0f64;
        for (slot, &i) in next.iter_mut().zip(&free) {
            *slot = g.transition_apply(i, &values);
            change = change.max((*slot - values[i]).abs());
        }
        if change <= cfg.tolerance && error_estimate(change, previous) <= cfg.tolerance {
            if iterations < cfg.max_iterations {
                for (&v, &i) in next.iter().zip(&free) {
                    values[i] = v;
                }
                iterations += 1;
            }
            let residual = laplace_residual(g, &values, seed_mask);
            return Outcome {
                values,
                residual,
                iterations,
                converged: residual <= cfg.tolerance,
            };
        }
        if iterations == cfg.max_iterations {
            return Outcome {
                values,
                residual: change,
                iterations,
                converged: false,
            };
        }
        for (&v, &i) in next.iter().zip(&free) {
            values[i] = v;
        }
        iterations += 1;
        previous = Some(change);
    }
}

fn error_estimate(change: f64, previous: Option<f64>) -> f64 {
    match previous {
        None => change,
        Some(prev) if change == 0.0 || prev == 0.0 => change,
        Some(prev) => {
            let ratio = change / prev;
            if ratio < 1.0 {
                change * ratio / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        }
    }
}
