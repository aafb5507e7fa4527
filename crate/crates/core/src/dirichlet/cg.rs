use super::{laplace_residual, Outcome};
use crate::dirichlet::SolverConfig;
use crate::graph::Graph;

/// The grounded Laplacian restricted to free nodes, `M = D_ff − A_ff`.
struct Grounded<'a> {
    g: &'a Graph,
    free: Vec<usize>,
    /// Position of each node among the free nodes, `usize::MAX` for seeds.
    position: Vec<usize>,
}

impl Grounded<'_> {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (k, &i) in self.free.iter().enumerate() {
            let coupled: f64 = self
                .g
                .neighbors(i)
                .filter_map(|(j, w)| {
                    let m = self.position[j];
                    (m != usize::MAX).then(|| w * x[m])
                })
                .sum();
            out[k] = self.g.degree(i) * x[k] - coupled;
        }
    }

    /// `b − M x`, where `b = A_fs Y` is read off the pinned seed values.
    fn residual(&self, values: &[f64], x: &[f64], out: &mut [f64]) {
        for (k, &i) in self.free.iter().enumerate() {
            let mut r = -self.g.degree(i) * x[k];
            for (j, w) in self.g.neighbors(i) {
                let m = self.position[j];
                r += if m == usize::MAX {
                    w * values[j]
                } else {
                    w * x[m]
                };
            }
            out[k] = r;
        }
    }

    /// Recurrence residual in the scaled units of the stopping rule.
    fn scaled_max(&self, r: &[f64]) -> f64 {
        r.iter()
            .zip(&self.free)
            .map(|(&ri, &i)| (ri / self.g.degree(i)).abs())
            .fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradient.
pub(super) fn solve(
    g: &Graph,
    seed_mask: &[bool],
    mut values: Vec<f64>,
    cfg: &SolverConfig,
) -> Outcome {
    let n = g.node_count();
    let free: Vec<usize> = (0..n).filter(|&i| !seed_mask[i]).collect();
    let mut position = vec![usize::MAX; n];
    for (k, &i) in free.iter().enumerate() {
        position[i] = k;
    }
    let m = free.len();
    let inv_diag: Vec<f64> = free
        .iter()
        .map(|&i| 1.0 / (g.degree(i) - g.weight(i, i)))
        .collect();
    let op = Grounded { g, free, position };

    let mut x: Vec<f64> = op.free.iter().map(|&i| values[i]).collect();
    let mut r = vec![0.0; m];
    let mut z = vec![0.0; m];
    let mut p = vec![0.0; m];
    let mut ap = vec![0.0; m];
    let mut iterations = 0;

    let write_back = |values: &mut Vec<f64>, x: &[f64]| {
        for (&xi, &i) in x.iter().zip(&op.free) {
            values[i] = xi;
        }
    };

    // Outer loop restarts from the true residual whenever the recurrence
    // residual claims convergence that the true residual does not confirm.
    loop {
        op.residual(&values, &x, &mut r);
        write_back(&mut values, &x);
        let residual = laplace_residual(g, &values, seed_mask);
        if residual <= cfg.tolerance || iterations >= cfg.max_iterations {
            return Outcome {
                values,
                residual,
                iterations,
                converged: residual <= cfg.tolerance,
            };
        }

        for k in 0..m {
            z[k] = inv_diag[k] * r[k];
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        let pass_start = iterations;
        while iterations < cfg.max_iterations {
            op.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap.is_nan() || pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for k in 0..m {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            iterations += 1;
            if op.scaled_max(&r) <= cfg.tolerance {
                break;
            }
            for k in 0..m {
                z[k] = inv_diag[k] * r[k];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for k in 0..m {
                p[k] = z[k] + beta * p[k];
            }
        }
        if iterations == pass_start {
            write_back(&mut values, &x);
            return Outcome {
                values,
                residual,
                iterations,
                converged: false,
            };
        }
    }
}
