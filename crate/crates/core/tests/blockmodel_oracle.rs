mod common;

use approx::assert_relative_eq;
use dirichlet_classifier::blockmodel::all_closed_forms;
use dirichlet_classifier::{
    build_block_graph, closed_form, solve_dirichlet, BlockModelParams, BoundaryCondition, Graph,
    SolverConfig,
};
use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i128>;

/// Free-node temperatures from a dense solve of `(D − A)_ff x = A_fs y`.
fn dense_solve(g: &Graph, seeds: &[usize], hot: &[bool]) -> Vec<f64> {
    let n = g.node_count();
    let is_seed: Vec<bool> = (0..n).map(|i| seeds.contains(&i)).collect();
    let free: Vec<usize> = (0..n).filter(|&i| !is_seed[i]).collect();
    let pos: Vec<Option<usize>> = {
        let mut p = vec![None; n];
        for (k, &i) in free.iter().enumerate() {
            p[i] = Some(k);
        }
        p
    };
    let m = free.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut b = DVector::<f64>::zeros(m);
    for (r, &i) in free.iter().enumerate() {
        a[(r, r)] += g.degree(i);
        for (j, w) in g.neighbors(i) {
            match pos[j] {
                Some(c) => a[(r, c)] -= w,
                None if hot[j] => b[r] += w,
                None => {}
            }
        }
    }
    let x = a.lu().solve(&b).expect("grounded Laplacian is nonsingular");
    let mut t: Vec<f64> = (0..n).map(|i| if hot[i] { 1.0 } else { 0.0 }).collect();
    for (k, &i) in free.iter().enumerate() {
        t[i] = x[k];
    }
    t
}

/// Exact block temperatures from the `K` block-level balance equations.
fn rational_blocks(sizes: &[i128], seeds: &[i128], p: Q, q: Q, hot: usize) -> (Vec<Q>, Q) {
    let k = sizes.len();
    let n: i128 = sizes.iter().sum();
    let w = |a: usize, b: usize| if a == b { p } else { q };
    let mut m = vec![vec![Q::from_integer(0); k + 1]; k];
    for r in 0..k {
        let degree = p * sizes[r] + q * (n - sizes[r]);
        for c in 0..k {
            m[r][c] = -w(r, c) * (sizes[c] - seeds[c]);
        }
        m[r][r] += degree;
        m[r][k] = w(r, hot) * seeds[hot];
    }
    for col in 0..k {
        let pivot = (col..k).find(|&r| m[r][col] != Q::from_integer(0)).unwrap();
        m.swap(col, pivot);
        for r in 0..k {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=k {
                    let sub = f * m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    let t: Vec<Q> = (0..k).map(|r| m[r][k] / m[r][r]).collect();
    let total: Q = (0..k)
        .map(|j| {
            t[j] * (sizes[j] - seeds[j])
                + if j == hot {
                    Q::from_integer(seeds[j])
                } else {
                    Q::from_integer(0)
                }
        })
        .sum();
    (t, total / n)
}

fn q_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[test]
fn seed_asymmetry_golden_values() {
    let (p, q) = (Q::new(1, 10), Q::new(1, 100));
    let (t, mean) = rational_blocks(&[100, 100], &[10, 5], p, q, 0);
    assert_eq!(t, vec![Q::new(29, 39), Q::new(20, 39)]);
    assert_eq!(mean, Q::new(49, 78));
    let (t, mean) = rational_blocks(&[100, 100], &[10, 5], p, q, 1);
    assert_eq!(t, vec![Q::new(10, 39), Q::new(19, 39)]);
    assert_eq!(mean, Q::new(29, 78));

    let params = BlockModelParams::new(vec![100, 100], vec![10, 5], 0.1, 0.01).unwrap();
    let forms = all_closed_forms(&params).unwrap();
    for (form, (temps, mean)) in forms.iter().zip([
        ([29.0 / 39.0, 20.0 / 39.0], 49.0 / 78.0),
        ([10.0 / 39.0, 19.0 / 39.0], 29.0 / 78.0),
    ]) {
        for (a, b) in form.block_temperatures.iter().zip(temps) {
            assert_relative_eq!(*a, b, max_relative = 1e-13);
        }
        assert_relative_eq!(form.mean, mean, max_relative = 1e-13);
    }
}

#[test]
fn label_asymmetry_matches_exact_elimination() {
    let params = BlockModelParams::new(vec![100, 10], vec![5, 5], 0.1, 0.01).unwrap();
    for hot in 0..2 {
        let (t, mean) = rational_blocks(&[100, 10], &[5, 5], Q::new(1, 10), Q::new(1, 100), hot);
        let form = closed_form(&params, hot).unwrap();
        for (a, b) in form.block_temperatures.iter().zip(&t) {
            assert_relative_eq!(*a, q_f64(*b), max_relative = 1e-13);
        }
        assert_relative_eq!(form.mean, q_f64(mean), max_relative = 1e-13);
    }
}

fn small_params() -> impl Strategy<Value = (Vec<(i128, i128)>, i128, i128)> {
    (2usize..=4).prop_flat_map(|k| {
        (
            prop::collection::vec((2i128..=30).prop_flat_map(|n| (Just(n), 1..n)), k),
            1i128..=50,
            1i128..=50,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_rational_oracle((blocks, pn, qn) in small_params()) {
        let sizes: Vec<i128> = blocks.iter().map(|b| b.0).collect();
        let seeds: Vec<i128> = blocks.iter().map(|b| b.1).collect();
        let (p, q) = (Q::new(pn, 100), Q::new(qn, 100));
        let params = BlockModelParams::new(
            sizes.iter().map(|&s| s as usize).collect(),
            seeds.iter().map(|&s| s as usize).collect(),
            q_f64(p),
            q_f64(q),
        ).unwrap();
        for hot in 0..sizes.len() {
            let (t, mean) = rational_blocks(&sizes, &seeds, p, q, hot);
            let form = match closed_form(&params, hot) {
                Ok(f) => f,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            for (a, b) in form.block_temperatures.iter().zip(&t) {
                prop_assert!((a - q_f64(*b)).abs() <= 1e-12);
            }
            prop_assert!((form.mean - q_f64(mean)).abs() <= 1e-12);
        }
    }

    #[test]
    fn iterative_solve_matches_dense_oracle((blocks, pn, qn) in small_params()) {
        let params = BlockModelParams::new(
            blocks.iter().map(|b| b.0 as usize).collect(),
            blocks.iter().map(|b| b.1 as usize).collect(),
            pn as f64 / 100.0,
            qn as f64 / 100.0,
        ).unwrap();
        let g = build_block_graph(&params).unwrap();
        let seed_labels = params.seed_labels();
        let seeds = seed_labels.nodes();
        let blocks_of = params.block_of_nodes();
        for hot_block in 0..params.num_blocks() {
            let hot: Vec<bool> = (0..g.node_count())
                .map(|i| seed_labels.get(i).is_some() && blocks_of[i] == hot_block)
                .collect();
            let oracle = dense_solve(&g, &seeds, &hot);
            let bc = BoundaryCondition::new(
                seeds.clone(),
                seeds.iter().map(|&s| if hot[s] { 1.0 } else { 0.0 }).collect(),
            ).unwrap();
            let t = solve_dirichlet(&g, &bc, &SolverConfig::default()).unwrap();
            prop_assert!(common::max_abs_diff(t.values(), &oracle) <= 1e-8);
        }
    }
}
