//! Strategies and property checks shared by the property suites and the
//! acceptance target.
#![allow(dead_code)]

use dirichlet_classifier::blockmodel::all_closed_forms;
use dirichlet_classifier::classifier::one_vs_all_fields;
use dirichlet_classifier::dirichlet::solve_dirichlet_from;
use dirichlet_classifier::{
    build_block_graph, classify, classify_binary, solve_dirichlet, BlockModelParams,
    BoundaryCondition, CenteringMode, Edge, Graph, Label, LabeledNodes, Method, SolverConfig,
};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const TOL: f64 = 1e-9;

pub fn cfg(method: Method) -> SolverConfig {
    SolverConfig::default().with_method(method)
}

/// Random spanning tree plus extra edges, weights in `[0.25, 4]`.
pub fn connected_graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (3..=max_nodes).prop_flat_map(|n| {
        (
            prop::collection::vec((any::<Index>(), 0.25f64..4.0), n - 1),
            prop::collection::vec((any::<Index>(), any::<Index>(), 0.25f64..4.0), 0..2 * n),
        )
            .prop_map(move |(tree, extra)| {
                let mut edges: Vec<Edge> = tree
                    .iter()
                    .enumerate()
                    .map(|(i, (parent, w))| Edge::new(parent.index(i + 1), i + 1, *w))
                    .collect();
                edges.extend(
                    extra
                        .iter()
                        .map(|(a, b, w)| Edge::new(a.index(n), b.index(n), *w)),
                );
                Graph::with_node_count(n, edges).expect("tree edges make every degree positive")
            })
    })
}

/// A connected graph with a nonempty strict subset of seeds and boundary
/// values drawn from `values`.
pub fn dirichlet_case(
    max_nodes: usize,
    values: std::ops::Range<f64>,
) -> impl Strategy<Value = (Graph, BoundaryCondition)> {
    connected_graph(max_nodes).prop_flat_map(move |g| {
        let n = g.node_count();
        (
            Just(g),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            1..n,
            prop::collection::vec(values.clone(), n),
        )
            .prop_map(|(g, order, m, vals)| {
                let seeds = order[..m].to_vec();
                let bc =
                    BoundaryCondition::new(seeds.clone(), seeds.iter().map(|&s| vals[s]).collect())
                        .expect("distinct seeds");
                (g, bc)
            })
    })
}

/// A connected graph with seeds covering labels `1..=k` and at least one
/// free node.
pub fn labeled_case(max_nodes: usize, k: usize) -> impl Strategy<Value = (Graph, LabeledNodes)> {
    connected_graph(max_nodes)
        .prop_filter("room for k seeds and a free node", move |g| {
            g.node_count() > k
        })
        .prop_flat_map(move |g| {
            let n = g.node_count();
            (
                Just(g),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                0..n - k,
                prop::collection::vec(0..k, n),
            )
                .prop_map(move |(g, order, extra, draws)| {
                    let pairs = order[..k + extra].iter().enumerate().map(|(pos, &node)| {
                        let idx = if pos < k { pos } else { draws[node] };
                        (node, Label::from_index(idx))
                    });
                    let seeds = LabeledNodes::from_pairs(g.node_count(), pairs, k).unwrap();
                    (g, seeds)
                })
        })
}

/// Random permutation of `0..n` given as `perm[old] = new`.
pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

pub fn permute_graph(g: &Graph, perm: &[usize]) -> Graph {
    let edges = g
        .edges()
        .map(|e| Edge::new(perm[e.src], perm[e.dst], e.weight));
    Graph::with_node_count(g.node_count(), edges).unwrap()
}

pub fn permute_labels(labels: &LabeledNodes, perm: &[usize]) -> LabeledNodes {
    let mut out = vec![None; labels.node_count()];
    for (i, l) in labels.as_slice().iter().enumerate() {
        out[perm[i]] = *l;
    }
    LabeledNodes::new(out, labels.num_labels()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn solve(g: &Graph, bc: &BoundaryCondition, method: Method) -> Result<Vec<f64>, TestCaseError> {
    solve_dirichlet(g, bc, &cfg(method))
        .map(|t| t.into_values())
        .map_err(|e| TestCaseError::fail(format!("solve failed: {e}")))
}

fn map_values(bc: &BoundaryCondition, f: impl Fn(f64) -> f64) -> BoundaryCondition {
    BoundaryCondition::new(
        bc.seeds().to_vec(),
        bc.values().iter().map(|&v| f(v)).collect(),
    )
    .unwrap()
}

pub fn maximum_principle(
    g: &Graph,
    bc: &BoundaryCondition,
    method: Method,
) -> Result<(), TestCaseError> {
    let t = solve(g, bc, method)?;
    let lo = bc.values().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = bc
        .values()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let slack = 10.0 * TOL * lo.abs().max(hi.abs()).max(1.0);
    for (i, v) in t.iter().enumerate() {
        prop_assert!(
            *v >= lo - slack && *v <= hi + slack,
            "node {i}: {v} outside [{lo}, {hi}]"
        );
    }
    Ok(())
}

pub fn affinity(
    g: &Graph,
    bc: &BoundaryCondition,
    alpha: f64,
    beta: f64,
    method: Method,
) -> Result<(), TestCaseError> {
    let base = solve(g, bc, method)?;
    let shifted = solve(g, &map_values(bc, |v| alpha * v + beta), method)?;
    let expected: Vec<f64> = base.iter().map(|v| alpha * v + beta).collect();
    let scale = alpha.abs().max(1.0) * 10.0 * TOL;
    let diff = max_abs_diff(&shifted, &expected);
    prop_assert!(diff <= scale, "affine map off by {diff}");

    let flipped = solve(g, &map_values(bc, |v| 1.0 - v), method)?;
    let expected: Vec<f64> = base.iter().map(|v| 1.0 - v).collect();
    let diff = max_abs_diff(&flipped, &expected);
    prop_assert!(diff <= 10.0 * TOL, "solve(1 - Y) off by {diff}");
    Ok(())
}

pub fn backend_agreement(g: &Graph, bc: &BoundaryCondition) -> Result<(), TestCaseError> {
    let a = solve(g, bc, Method::FixedPoint)?;
    let b = solve(g, bc, Method::GroundedSolve)?;
    let diff = max_abs_diff(&a, &b);
    prop_assert!(diff <= 10.0 * TOL, "backends differ by {diff}");
    Ok(())
}

pub fn idempotence(g: &Graph, bc: &BoundaryCondition, method: Method) -> Result<(), TestCaseError> {
    let c = cfg(method);
    let first = solve_dirichlet(g, bc, &c).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let again = solve_dirichlet_from(g, bc, &c, Some(first.values()))
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(
        again.iterations <= 1,
        "restart took {} iterations",
        again.iterations
    );
    Ok(())
}

/// `Σ_k T(k) = 1` and, with all-nodes centering, `Σ_k Δ(k) = 0` at every node.
pub fn label_sums(g: &Graph, seeds: &LabeledNodes) -> Result<(), TestCaseError> {
    let k = seeds.num_labels();
    let fields = one_vs_all_fields(g, seeds, &SolverConfig::default())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let pred = classify(g, seeds, CenteringMode::AllNodes, &SolverConfig::default())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let bound = k as f64 * TOL;
    for i in 0..g.node_count() {
        let t: f64 = fields.iter().map(|f| f.values()[i]).sum();
        prop_assert!((t - 1.0).abs() <= bound, "node {i}: Σ T = {t}");
        let d: f64 = pred.scores.row(i).iter().sum();
        prop_assert!(d.abs() <= bound, "node {i}: Σ Δ = {d}");
    }
    Ok(())
}

pub fn binary_agreement(g: &Graph, seeds: &LabeledNodes) -> Result<(), TestCaseError> {
    let c = SolverConfig::default();
    for mode in CenteringMode::ALL {
        let multi = classify(g, seeds, mode, &c).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let binary =
            classify_binary(g, seeds, mode, &c).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(multi.as_slice(), binary.as_slice(), "mode {}", mode);
    }
    Ok(())
}

/// Random block-model parameters with `p > q`.
pub fn assortative_params() -> impl Strategy<Value = BlockModelParams> {
    (2usize..=5)
        .prop_flat_map(|k| {
            (
                prop::collection::vec((2usize..=40, 0.0f64..1.0), k),
                0.01f64..1.0,
                1.05f64..20.0,
            )
        })
        .prop_filter_map("leave a free node", |(blocks, q, ratio)| {
            let sizes: Vec<usize> = blocks.iter().map(|b| b.0).collect();
            let seeds: Vec<usize> = blocks
                .iter()
                .map(|&(n, u)| 1 + ((n - 1) as f64 * u) as usize)
                .collect();
            BlockModelParams::new(sizes, seeds, q * ratio, q).ok()
        })
}

/// With `p > q` the hot block's centered temperature is positive and every
/// other block's negative.
pub fn sign_structure(params: &BlockModelParams) -> Result<(), TestCaseError> {
    let forms = all_closed_forms(params).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for form in &forms {
        for (k, d) in form.deviations().iter().enumerate() {
            if k == form.hot_block {
                prop_assert!(*d > 0.0, "hot block {}: Δ = {d}", k + 1);
            } else {
                prop_assert!(
                    *d < 0.0,
                    "block {} under hot block {}: Δ = {d}",
                    k + 1,
                    form.hot_block + 1
                );
            }
        }
    }
    Ok(())
}

/// The solved block-model fields have the same sign structure as the closed
/// form.
pub fn solved_sign_structure(params: &BlockModelParams) -> Result<(), TestCaseError> {
    let g = build_block_graph(params).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let seeds = params.seed_labels();
    let pred = classify(
        &g,
        &seeds,
        CenteringMode::AllNodes,
        &SolverConfig::default(),
    )
    .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let blocks = params.block_of_nodes();
    for i in 0..g.node_count() {
        if seeds.get(i).is_some() {
            continue;
        }
        for (l, d) in pred.scores.row(i).iter().enumerate() {
            prop_assert_eq!(
                *d > 0.0,
                l == blocks[i],
                "node {} label {}: Δ = {}",
                i,
                l + 1,
                d
            );
        }
    }
    Ok(())
}

/// Runs `check` on `cases` inputs from `strategy`, returning the number of
/// cases or the failure message.
pub fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, check)
        .map(|()| cases)
        .map_err(|e| e.to_string())
}
