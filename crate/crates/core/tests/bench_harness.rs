use std::sync::Arc;

use dirichlet_classifier::bench::report::{to_csv, CSV_HEADER};
use dirichlet_classifier::bench::{
    generate_sbm, run_experiment, run_sweep, DataSource, ExperimentSpec, SbmParams, SeedRule,
    SweepSpec,
};
use dirichlet_classifier::io::{load_edge_list, load_labels};
use dirichlet_classifier::{CenteringMode, SolverConfig};

#[test]
fn sbm_edge_count_matches_expectation() {
    let g = generate_sbm(&SbmParams {
        sizes: vec![5000, 5000],
        p: 1e-2,
        q: 1e-3,
        seed: 11,
    })
    .unwrap();
    let within = 2.0 * (5000.0 * 4999.0 / 2.0);
    let across = 5000.0 * 5000.0;
    let mean = within * 1e-2 + across * 1e-3;
    let var = within * 1e-2 * (1.0 - 1e-2) + across * 1e-3 * (1.0 - 1e-3);
    let sampled = g.graph.edge_count() as f64;
    assert!(
        (sampled - mean).abs() <= 5.0 * var.sqrt(),
        "{sampled} edges, expected {mean} ± {}",
        var.sqrt()
    );
    assert_eq!(g.graph.node_count() + g.isolated_removed, 10_000);
}

fn small_spec(point: &str, reps: usize) -> ExperimentSpec {
    ExperimentSpec {
        point: point.into(),
        parameter: None,
        source: DataSource::Sbm {
            sizes: vec![60, 40],
            p: 0.2,
            q: 0.02,
        },
        seeds: SeedRule::PerClass(vec![4, 2]),
        modes: CenteringMode::ALL.to_vec(),
        repetitions: reps,
        master_seed: 5,
        solver: SolverConfig::default(),
    }
}

#[test]
fn single_repetition_gives_single_row_per_mode_and_statistic() {
    let report = run_experiment(&small_spec("trivial", 1)).unwrap();
    assert_eq!(report.points.len(), 1);
    assert_eq!(report.points[0].modes.len(), 3);
    for m in &report.points[0].modes {
        assert_eq!(m.runs, 1);
        assert_eq!(m.macro_f1_std, 0.0);
    }
    let csv = to_csv(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 3 * 5);
}

#[test]
fn sweep_points_follow_ratio_layout() {
    let mut sweep = SweepSpec::seed_asymmetry(2);
    sweep.nodes = 200;
    sweep.seeds = 2;
    sweep.p = 0.2;
    sweep.q = 0.02;
    sweep.ratios = vec![1, 4];
    let specs = sweep.expand(&small_spec("template", 2)).unwrap();
    assert_eq!(specs[1].point, "ratio=4");
    assert!(matches!(&specs[1].seeds, SeedRule::PerClass(c) if c == &vec![8, 2]));
    let report = run_sweep(&specs).unwrap();
    assert_eq!(report.points.len(), 2);
    assert_eq!(report.std_convention, "population");
}

#[test]
fn reports_are_bitwise_reproducible_across_workers() {
    let spec = small_spec("repro", 6);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| run_experiment(&spec)).unwrap();
    let b = one.install(|| run_experiment(&spec)).unwrap();
    let c = four.install(|| run_experiment(&spec)).unwrap();
    assert_eq!(to_csv(&a).unwrap(), to_csv(&b).unwrap());
    assert_eq!(to_csv(&a).unwrap(), to_csv(&c).unwrap());
    assert_eq!(a.without_timing(), c.without_timing());
}

#[test]
fn karate_fraction_experiment_runs() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let loaded = load_edge_list(&dir.join("karate.edges")).unwrap();
    let labels = load_labels(&dir.join("karate.labels"), &loaded.ids).unwrap();
    let spec = ExperimentSpec {
        point: "karate".into(),
        parameter: Some(0.1),
        source: DataSource::Fixed {
            name: "karate".into(),
            graph: Arc::new(loaded.graph),
            labels: Arc::new(labels),
        },
        seeds: SeedRule::Fraction(0.1),
        modes: vec![CenteringMode::None, CenteringMode::AllNodes],
        repetitions: 20,
        master_seed: 3,
        solver: SolverConfig::default(),
    };
    let report = run_experiment(&spec).unwrap();
    for m in &report.points[0].modes {
        assert!(m.macro_f1_mean > 0.5, "{}: {}", m.mode, m.macro_f1_mean);
    }
    assert!(!report.notes.is_empty());
}
