//! Fixed-point iteration against the grounded conjugate-gradient solve on a
//! ring with a chord, from a cold start and from a converged field.
//!
//! ```text
//! cargo run --example solver_backends -- [nodes]
//! ```

use dirichlet_classifier::dirichlet::solve_dirichlet_from;
use dirichlet_classifier::{build_graph, solve_dirichlet, BoundaryCondition, Method, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(200);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.push((0, n / 2));
    let g = build_graph(edges)?;
    let bc = BoundaryCondition::from_pairs([(0, 1.0), (n / 3, 0.0), (2 * n / 3, 0.25)])?;

    let mut fields = Vec::new();
    for method in [Method::FixedPoint, Method::GroundedSolve] {
        let cfg = SolverConfig::default().with_method(method);
        let t = solve_dirichlet(&g, &bc, &cfg)?;
        let warm = solve_dirichlet_from(&g, &bc, &cfg, Some(t.values()))?;
        println!(
            "{method:?}: {} iterations, residual {:.1e}; warm restart {} iterations",
            t.iterations, t.residual, warm.iterations
        );
        fields.push(t);
    }
    let gap = fields[0]
        .values()
        .iter()
        .zip(fields[1].values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max difference between backends: {gap:.1e}");
    Ok(())
}
