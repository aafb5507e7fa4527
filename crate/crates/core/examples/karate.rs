//! Two seeds on Zachary's karate club, every centering mode.
//!
//! ```text
//! cargo run --example karate
//! ```

use std::path::Path;

use dirichlet_classifier::bench::macro_f1;
use dirichlet_classifier::io::{load_edge_list, load_labels};
use dirichlet_classifier::{classify_binary, classify_modes, CenteringMode, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let loaded = load_edge_list(&data.join("karate.edges"))?;
    let truth = load_labels(&data.join("karate.labels"), &loaded.ids)?;
    let seeds = load_labels(&data.join("karate.seeds"), &loaded.ids)?;
    let g = &loaded.graph;
    println!("{} members, {} ties", g.node_count(), g.edge_count());

    let cfg = SolverConfig::default();
    let free_truth = truth.without(&seeds);
    let predictions = classify_modes(g, &seeds, &CenteringMode::ALL, &cfg)?;
    for (mode, pred) in CenteringMode::ALL.iter().zip(&predictions) {
        let f1 = macro_f1(&free_truth, pred)?;
        let binary = classify_binary(g, &seeds, *mode, &cfg)?;
        println!(
            "{mode:>5}: macro-F1 {:.3}, binary rule agrees: {}",
            f1.macro_f1,
            binary.as_slice() == pred.as_slice()
        );
    }

    let centered = &predictions[1];
    let wrong: Vec<u64> = centered
        .iter()
        .filter(|&(i, l)| truth.get(i) != Some(l))
        .map(|(i, _)| loaded.ids.original(i))
        .collect();
    println!("misclassified with all-nodes centering: {wrong:?}");
    Ok(())
}
