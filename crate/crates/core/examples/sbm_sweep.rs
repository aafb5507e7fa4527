//! Seed-asymmetry sweep over a two-block stochastic block model.
//!
//! ```text
//! cargo run --release --example sbm_sweep -- [nodes] [reps]
//! ```
//!
//! Defaults to 2000 nodes and 5 repetitions per ratio; 10000 nodes with 20
//! repetitions matches the acceptance run.

use dirichlet_classifier::bench::report::{summary_table, to_csv};
use dirichlet_classifier::bench::{run_sweep, DataSource, ExperimentSpec, SeedRule, SweepSpec};
use dirichlet_classifier::{CenteringMode, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let nodes: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(2000);
    let reps: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(5);

    let mut sweep = SweepSpec::seed_asymmetry(2);
    sweep.nodes = nodes;
    sweep.seeds = nodes / 40;
    let template = ExperimentSpec {
        point: String::new(),
        parameter: None,
        source: DataSource::Sbm {
            sizes: Vec::new(),
            p: sweep.p,
            q: sweep.q,
        },
        seeds: SeedRule::PerClass(Vec::new()),
        modes: CenteringMode::ALL.to_vec(),
        repetitions: reps,
        master_seed: 1,
        solver: SolverConfig::default(),
    };
    let report = run_sweep(&sweep.expand(&template)?)?;
    print!("{}", summary_table(&report));
    if std::env::var_os("SBM_SWEEP_CSV").is_some() {
        print!("{}", to_csv(&report)?);
    }
    Ok(())
}
