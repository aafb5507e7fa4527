//! Classifies a graph from files, drawing a fraction of the labelled nodes
//! as seeds.
//!
//! ```text
//! cargo run --example classify_files -- <edges> <labels> [fraction] [rng-seed]
//! ```
//!
//! Without arguments the bundled karate club files are used.

use std::path::{Path, PathBuf};

use dirichlet_classifier::bench::experiment::stream_rng;
use dirichlet_classifier::bench::{classify_reachable, macro_f1_labels, sample_seeds, SeedRule};
use dirichlet_classifier::io::{load_edge_list, load_labels};
use dirichlet_classifier::{CenteringMode, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut args = std::env::args().skip(1);
    let edges = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| data.join("karate.edges"));
    let labels = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| data.join("karate.labels"));
    let fraction: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.1);
    let rng_seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(7);

    let loaded = load_edge_list(&edges)?;
    let truth = load_labels(&labels, &loaded.ids)?;
    let mut rng = stream_rng(rng_seed, 0, 0, 1);
    let seeds = sample_seeds(&truth, &SeedRule::Fraction(fraction), &mut rng)?;
    println!(
        "{} nodes, {} edges, {} labels, {} seeds",
        loaded.graph.node_count(),
        loaded.graph.edge_count(),
        truth.num_labels(),
        seeds.len()
    );

    let result = classify_reachable(
        &loaded.graph,
        &seeds,
        &CenteringMode::ALL,
        &SolverConfig::default(),
    )?;
    let free_truth = truth.without(&seeds);
    for (mode, pred) in CenteringMode::ALL.iter().zip(&result.predictions) {
        println!(
            "{mode:>5}: macro-F1 {:.3}",
            macro_f1_labels(&free_truth, pred)?.macro_f1
        );
    }
    if result.unseeded_free > 0 {
        println!(
            "{} nodes sit in components without a seed",
            result.unseeded_free
        );
    }
    Ok(())
}
