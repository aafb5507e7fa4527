//! Closed-form temperatures of the deterministic block model, checked
//! against an iterative solve, and the two asymmetric cases where skipping
//! the centering step breaks classification.
//!
//! ```text
//! cargo run --example blockmodel_check
//! ```

use dirichlet_classifier::blockmodel::all_closed_forms;
use dirichlet_classifier::{
    build_block_graph, classify, consistency_check, solve_dirichlet, uncentered_failure_check,
    BlockModelParams, BoundaryCondition, CenteringMode, SolverConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("seed asymmetry", vec![100, 100], vec![10, 5]),
        ("label asymmetry", vec![100, 10], vec![5, 5]),
        ("symmetric", vec![50, 50], vec![5, 5]),
    ];
    let cfg = SolverConfig::default();
    for (name, sizes, seeds) in cases {
        let params = BlockModelParams::new(sizes, seeds, 0.1, 0.01)?;
        let g = build_block_graph(&params)?;
        let labels = params.seed_labels();
        let blocks = params.block_of_nodes();
        println!(
            "{name}: sizes {:?}, seeds {:?}",
            params.sizes, params.seed_counts
        );

        for form in all_closed_forms(&params)? {
            let bc = BoundaryCondition::from_pairs(labels.iter().map(|(i, l)| {
                (
                    i,
                    if l.index() == form.hot_block {
                        1.0
                    } else {
                        0.0
                    },
                )
            }))?;
            let t = solve_dirichlet(&g, &bc, &cfg)?;
            let err = t
                .free_nodes()
                .map(|i| (t.values()[i] - form.block_temperatures[blocks[i]]).abs())
                .fold(0.0, f64::max);
            println!(
                "  label {} hot: blocks {:.4?}, mean {:.4}, solver error {err:.1e}",
                form.hot_block + 1,
                form.block_temperatures,
                form.mean
            );
        }

        let truth = params.truth_labels();
        for mode in [CenteringMode::None, CenteringMode::AllNodes] {
            let pred = classify(&g, &labels, mode, &cfg)?;
            let wrong = pred
                .iter()
                .filter(|&(i, l)| truth.get(i) != Some(l))
                .count();
            println!(
                "  {mode:>4}: {wrong} of {} free nodes misclassified",
                pred.len()
            );
        }
        println!(
            "  analytic: {:?}, uncentered {:?}",
            consistency_check(&params)?,
            uncentered_failure_check(&params)?
        );
    }
    Ok(())
}
