//! Command-line front end used by the `dirichlet` binary.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::report::{summary_table, to_csv, to_json};
use crate::bench::{
    macro_f1, run_sweep, sample_seeds, DataSource, ExperimentSpec, SeedRule, SweepKind, SweepSpec,
};
use crate::blockmodel::{
    all_closed_forms, consistency_check, uncentered_failure_check, BlockModelParams, Consistency,
    UncenteredOutcome,
};
use crate::classifier::{classify, CenteringMode};
use crate::dirichlet::{Method, SolverConfig};
use crate::error::{Error, Result};
use crate::io::{load_edge_list, load_labels, write_atomic, LoadedGraph};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Param(_) => EXIT_USAGE,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_DATA,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dirichlet",
    version,
    about = "Node classification by heat diffusion with temperature centering"
)]
pub struct Cli {
    /// Worker threads; 1 gives bitwise reproducible output.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the free nodes of a graph from labelled seeds.
    Classify(ClassifyArgs),
    /// Closed-form analysis of the deterministic block model.
    BlockmodelCheck(BlockmodelArgs),
    /// Repeated experiments on stochastic block models or graph files.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CenteringArg {
    /// Raw temperatures.
    None,
    /// Subtract the mean over all nodes.
    All,
    /// Subtract the mean over free nodes.
    Free,
}

impl From<CenteringArg> for CenteringMode {
    fn from(c: CenteringArg) -> Self {
        match c {
            CenteringArg::None => CenteringMode::None,
            CenteringArg::All => CenteringMode::AllNodes,
            CenteringArg::Free => CenteringMode::FreeNodes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    FixedPoint,
    GroundedSolve,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::FixedPoint => Method::FixedPoint,
            MethodArg::GroundedSolve => Method::GroundedSolve,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Dirichlet solver backend.
    #[arg(long, value_enum, default_value_t = MethodArg::GroundedSolve)]
    pub method: MethodArg,
    /// Maximum Laplace residual max_i |T_i - (PT)_i| on free nodes.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Iteration budget per Dirichlet solve.
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            method: self.method.into(),
            tolerance: self.tol,
            max_iterations: self.max_iter,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("seed_source").required(true).args(["seeds", "seed_fraction"])))]
pub struct ClassifyArgs {
    /// Edge list: `src dst [weight]` per line.
    #[arg(long)]
    pub graph: PathBuf,
    /// Ground-truth labels `node label`; required with --seed-fraction.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Seed labels `node label`.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Draw this fraction of labelled nodes as seeds.
    #[arg(long, requires = "labels")]
    pub seed_fraction: Option<f64>,
    /// Random seed for --seed-fraction.
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Offset subtracted from each temperature field before the argmax.
    #[arg(long, value_enum, default_value_t = CenteringArg::All)]
    pub centering: CenteringArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output JSON path; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BlockmodelArgs {
    /// Number of blocks; must match --sizes when both are given.
    #[arg(long = "k", short = 'k')]
    pub blocks: Option<usize>,
    /// Block sizes, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "grid")]
    pub sizes: Vec<usize>,
    /// Seeds per block, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "grid")]
    pub seeds: Vec<usize>,
    /// Intra-block weight.
    #[arg(long, required_unless_present = "grid")]
    pub p: Option<f64>,
    /// Inter-block weight.
    #[arg(long, required_unless_present = "grid")]
    pub q: Option<f64>,
    /// Parameter file, one set per line: `sizes=a,b seeds=c,d p=x q=y`.
    #[arg(long, conflicts_with_all = ["sizes", "seeds", "p", "q", "blocks"])]
    pub grid: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// SBM block sizes, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["graph", "labels"], requires_all = ["p", "q"])]
    pub sizes: Vec<usize>,
    /// SBM intra-block edge probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// SBM inter-block edge probability.
    #[arg(long)]
    pub q: Option<f64>,
    /// Edge list file.
    #[arg(long, requires = "labels")]
    pub graph: Option<PathBuf>,
    /// Ground-truth label file.
    #[arg(long, requires = "graph")]
    pub labels: Option<PathBuf>,
    /// Sweep file (`key = value` lines).
    #[arg(long)]
    pub sweep: Option<PathBuf>,
    /// Seeds per class, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "seed_fraction")]
    pub seed_counts: Vec<usize>,
    /// Fraction of labelled nodes drawn as seeds.
    #[arg(long)]
    pub seed_fraction: Option<f64>,
    /// Centering modes to compare.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CenteringArg::None, CenteringArg::All, CenteringArg::Free])]
    pub modes: Vec<CenteringArg>,
    /// Repetitions per configuration point.
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Master random seed.
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Long-form CSV report path.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Full JSON report path.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Leave wall-clock figures out of the JSON report.
    #[arg(long)]
    pub no_timing: bool,
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let workers = cli.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Param(format!("cannot start {workers} workers: {e}")))?;
    let mut buffer: Vec<u8> = Vec::new();
    let result = pool.install(|| match &cli.command {
        Command::Classify(args) => cmd_classify(args, &mut buffer),
        Command::BlockmodelCheck(args) => cmd_blockmodel_check(args, &mut buffer),
        Command::Bench(args) => cmd_bench(args, &mut buffer),
    });
    out.write_all(&buffer).map_err(stdout_err)?;
    result
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

#[derive(Serialize)]
struct LabelScores {
    label: u32,
    seeds: usize,
    predicted: usize,
    offset: f64,
    score_min: f64,
    score_max: f64,
    residual: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct ClassifyOutput {
    centering: CenteringMode,
    method: Method,
    tolerance: f64,
    num_labels: usize,
    /// Original ids in compact order.
    id_map: Vec<u64>,
    seeds: BTreeMap<u64, u32>,
    predictions: BTreeMap<u64, u32>,
    scores: Vec<LabelScores>,
    #[serde(skip_serializing_if = "Option::is_none")]
    macro_f1: Option<f64>,
}

pub fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.solver.config()?;
    let LoadedGraph { graph, ids } = load_edge_list(&args.graph)?;
    let truth = args
        .labels
        .as_deref()
        .map(|p| load_labels(p, &ids))
        .transpose()?;
    let seeds = match (&args.seeds, args.seed_fraction) {
        (Some(path), _) => load_labels(path, &ids)?,
        (None, Some(fraction)) => {
            let truth = truth.as_ref().expect("clap requires --labels");
            let mut rng = crate::bench::experiment::stream_rng(args.rng_seed, 0, 0, 1);
            sample_seeds(truth, &SeedRule::Fraction(fraction), &mut rng)?
        }
        (None, None) => unreachable!("clap requires a seed source"),
    };
    let mode: CenteringMode = args.centering.into();
    let pred = classify(&graph, &seeds, mode, &cfg)?;

    let k = seeds.num_labels();
    let counts = seeds.counts();
    let mut predicted = vec![0usize; k];
    for (_, l) in pred.iter() {
        predicted[l.index()] += 1;
    }
    let scores = pred
        .scores
        .diagnostics
        .iter()
        .map(|d| {
            let column = pred.scores.column(d.label);
            LabelScores {
                label: d.label.get(),
                seeds: counts[d.label.index()],
                predicted: predicted[d.label.index()],
                offset: d.offset,
                score_min: column.iter().copied().fold(f64::INFINITY, f64::min),
                score_max: column.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                residual: d.residual,
                iterations: d.iterations,
            }
        })
        .collect();
    let macro_f1 = match &truth {
        Some(t) => {
            let free_truth = t.without(&seeds);
            (!free_truth.is_empty())
                .then(|| macro_f1(&free_truth, &pred).map(|f| f.macro_f1))
                .transpose()?
        }
        None => None,
    };
    let output = ClassifyOutput {
        centering: mode,
        method: cfg.method,
        tolerance: cfg.tolerance,
        num_labels: k,
        id_map: ids.originals().to_vec(),
        seeds: seeds
            .iter()
            .map(|(i, l)| (ids.original(i), l.get()))
            .collect(),
        predictions: pred
            .iter()
            .map(|(i, l)| (ids.original(i), l.get()))
            .collect(),
        scores,
        macro_f1,
    };
    let mut json = serde_json::to_string_pretty(&output).expect("output serialises");
    json.push('\n');
    match &args.output {
        Some(path) => {
            write_atomic(path, json.as_bytes())?;
            writeln!(
                out,
                "{} predictions for {} nodes written to {}",
                pred.len(),
                graph.node_count(),
                path.display()
            )
            .map_err(stdout_err)?;
        }
        None => out.write_all(json.as_bytes()).map_err(stdout_err)?,
    }
    Ok(())
}

fn parse_list(value: &str) -> Option<Vec<usize>> {
    value.split(',').map(|v| v.trim().parse().ok()).collect()
}

pub fn parse_grid_line(line: &str, source_name: &str, number: usize) -> Result<BlockModelParams> {
    let err = |message: String| Error::Parse {
        source_name: source_name.to_string(),
        line: number,
        message,
    };
    let mut sizes = None;
    let mut seeds = None;
    let mut p = None;
    let mut q = None;
    for token in line.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {token:?}")))?;
        let bad = || err(format!("invalid value {value:?} for {key}"));
        match key {
            "sizes" => sizes = Some(parse_list(value).ok_or_else(bad)?),
            "seeds" => seeds = Some(parse_list(value).ok_or_else(bad)?),
            "p" => p = Some(value.parse::<f64>().map_err(|_| bad())?),
            "q" => q = Some(value.parse::<f64>().map_err(|_| bad())?),
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    let missing = |k: &str| err(format!("missing {k}"));
    BlockModelParams::new(
        sizes.ok_or_else(|| missing("sizes"))?,
        seeds.ok_or_else(|| missing("seeds"))?,
        p.ok_or_else(|| missing("p"))?,
        q.ok_or_else(|| missing("q"))?,
    )
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct GridSummary {
    pub total: usize,
    pub consistent: usize,
    pub degenerate: usize,
    pub uncentered_failures: usize,
}

fn fmt_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn report_params(
    params: &BlockModelParams,
    out: &mut dyn Write,
    summary: &mut GridSummary,
) -> Result<()> {
    writeln!(
        out,
        "sizes={:?} seeds={:?} p={} q={}",
        params.sizes, params.seed_counts, params.p, params.q
    )
    .map_err(stdout_err)?;
    for cf in all_closed_forms(params)? {
        writeln!(
            out,
            "  hot block {}: free temperatures {} mean {:.6}",
            cf.hot_block + 1,
            fmt_values(&cf.block_temperatures),
            cf.mean
        )
        .map_err(stdout_err)?;
    }
    let centered = match consistency_check(params)? {
        Consistency::Consistent => {
            summary.consistent += 1;
            "consistent".to_string()
        }
        Consistency::Inconsistent(w) if w.tie => {
            summary.degenerate += 1;
            eprintln!(
                "warning: tied centered temperatures for block {} (p = q erases the block structure?)",
                w.block + 1
            );
            format!(
                "degenerate (tie, block {} resolves to label {})",
                w.block + 1,
                w.assigned + 1
            )
        }
        Consistency::Inconsistent(w) => format!(
            "inconsistent (block {} assigned label {})",
            w.block + 1,
            w.assigned + 1
        ),
    };
    let uncentered = match uncentered_failure_check(params)? {
        UncenteredOutcome::Correct => "correct".to_string(),
        UncenteredOutcome::Fails {
            block,
            confused_with,
        } => {
            summary.uncentered_failures += 1;
            format!(
                "FAILS (block {} free nodes not hotter than under label {})",
                block + 1,
                confused_with + 1
            )
        }
    };
    summary.total += 1;
    writeln!(out, "  centered: {centered}; uncentered: {uncentered}").map_err(stdout_err)
}

pub fn cmd_blockmodel_check(args: &BlockmodelArgs, out: &mut dyn Write) -> Result<()> {
    let mut summary = GridSummary::default();
    match &args.grid {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let name = path.display().to_string();
            for (idx, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let params = parse_grid_line(line, &name, idx + 1)?;
                report_params(&params, out, &mut summary)?;
            }
            writeln!(
                out,
                "{} parameter sets: {} consistent, {} degenerate, {} uncentered failures",
                summary.total, summary.consistent, summary.degenerate, summary.uncentered_failures
            )
            .map_err(stdout_err)?;
        }
        None => {
            if let Some(k) = args.blocks {
                if k != args.sizes.len() {
                    return Err(Error::Param(format!(
                        "--k {k} but {} block sizes given",
                        args.sizes.len()
                    )));
                }
            }
            let params = BlockModelParams::new(
                args.sizes.clone(),
                args.seeds.clone(),
                args.p.expect("clap requires --p"),
                args.q.expect("clap requires --q"),
            )?;
            report_params(&params, out, &mut summary)?;
        }
    }
    Ok(())
}

fn load_fixed(graph: &Path, labels: &Path) -> Result<DataSource> {
    let loaded = load_edge_list(graph)?;
    let truth = load_labels(labels, &loaded.ids)?;
    Ok(DataSource::Fixed {
        name: graph.display().to_string(),
        graph: Arc::new(loaded.graph),
        labels: Arc::new(truth),
    })
}

pub fn bench_specs(args: &BenchArgs) -> Result<Vec<ExperimentSpec>> {
    let solver = args.solver.config()?;
    let modes: Vec<CenteringMode> = args.modes.iter().map(|&m| m.into()).collect();
    let fixed = match (&args.graph, &args.labels) {
        (Some(g), Some(l)) => Some(load_fixed(g, l)?),
        _ => None,
    };
    let sbm = (!args.sizes.is_empty()).then(|| DataSource::Sbm {
        sizes: args.sizes.clone(),
        p: args.p.unwrap_or_default(),
        q: args.q.unwrap_or_default(),
    });
    let seed_rule = match (&args.seed_counts[..], args.seed_fraction) {
        ([], None) => None,
        ([], Some(f)) => Some(SeedRule::Fraction(f)),
        (counts, _) => Some(SeedRule::PerClass(counts.to_vec())),
    };

    let sweep = args
        .sweep
        .as_deref()
        .map(|path| {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            SweepSpec::parse(&text, &path.display().to_string())
        })
        .transpose()?;

    let source = match (&sweep, fixed, sbm) {
        (Some(s), Some(_), _) if s.kind != SweepKind::SeedFraction => {
            return Err(Error::Param(
                "block-ratio sweeps generate their own graphs; drop --graph/--labels".into(),
            ))
        }
        (Some(s), _, Some(_)) if s.kind != SweepKind::SeedFraction => {
            return Err(Error::Param(
                "block-ratio sweeps define their own block sizes; drop --sizes".into(),
            ))
        }
        (Some(s), None, _) if s.kind == SweepKind::SeedFraction => {
            return Err(Error::Param(
                "seed-fraction sweeps need --graph and --labels".into(),
            ))
        }
        (Some(_), Some(f), _) => f,
        (Some(_), None, _) => DataSource::Sbm {
            sizes: Vec::new(),
            p: 0.0,
            q: 0.0,
        },
        (None, Some(f), _) => f,
        (None, None, Some(s)) => s,
        (None, None, None) => {
            return Err(Error::Param(
                "give --sizes/--p/--q, --graph/--labels or --sweep".into(),
            ))
        }
    };

    let template = ExperimentSpec {
        point: "base".into(),
        parameter: None,
        source,
        seeds: seed_rule.clone().unwrap_or(SeedRule::Fraction(0.05)),
        modes,
        repetitions: args.reps,
        master_seed: args.rng_seed,
        solver,
    };
    match sweep {
        Some(s) => s.expand(&template),
        None => {
            if seed_rule.is_none() {
                return Err(Error::Param("give --seed-counts or --seed-fraction".into()));
            }
            Ok(vec![template])
        }
    }
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let specs = bench_specs(args)?;
    let mut report = run_sweep(&specs)?;
    if args.no_timing {
        report = report.without_timing();
    }
    if let Some(path) = &args.out_csv {
        write_atomic(path, to_csv(&report)?.as_bytes())?;
    }
    if let Some(path) = &args.out_json {
        let mut json = to_json(&report);
        json.push('\n');
        write_atomic(path, json.as_bytes())?;
    }
    out.write_all(summary_table(&report).as_bytes())
        .map_err(stdout_err)?;
    for note in &report.notes {
        writeln!(out, "note: {note}").map_err(stdout_err)?;
    }
    Ok(())
}
