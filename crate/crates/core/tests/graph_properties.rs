mod common;

use std::path::Path;

use common::*;
use dirichlet_classifier::io::load_edge_list;
use dirichlet_classifier::{connected_components_with_seeds, Graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degrees_sum_row_weights(g in connected_graph(20)) {
        for i in 0..g.node_count() {
            let row: f64 = g.neighbors(i).map(|(_, w)| w).sum();
            prop_assert!((row - g.degree(i)).abs() <= 1e-12 * row);
        }
        let loops: f64 = (0..g.node_count()).map(|i| g.weight(i, i)).sum();
        let edges: f64 = g.edges().map(|e| e.weight).sum();
        prop_assert!((g.total_degree() - (2.0 * edges - loops)).abs() <= 1e-9 * g.total_degree());
    }

    #[test]
    fn adjacency_is_symmetric(g in connected_graph(20)) {
        for i in 0..g.node_count() {
            for (j, w) in g.neighbors(i) {
                prop_assert_eq!(g.weight(j, i), w);
            }
        }
    }

    #[test]
    fn rebuild_from_edges_is_identity(g in connected_graph(20)) {
        let again = Graph::with_node_count(g.node_count(), g.edges()).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn relabelling_permutes_degrees(
        (g, perm) in connected_graph(20).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), permutation(n))
        }),
    ) {
        let pg = permute_graph(&g, &perm);
        prop_assert_eq!(pg.edge_count(), g.edge_count());
        for i in 0..g.node_count() {
            prop_assert!((pg.degree(perm[i]) - g.degree(i)).abs() <= 1e-12 * g.degree(i));
            for (j, w) in g.neighbors(i) {
                prop_assert_eq!(pg.weight(perm[i], perm[j]), w);
            }
        }
    }

    #[test]
    fn connected_graphs_have_one_component(g in connected_graph(20)) {
        let c = connected_components_with_seeds(&g, &[0]);
        prop_assert_eq!(c.len(), 1);
        prop_assert_eq!(c.first_seedless(), None);
    }
}

#[test]
fn karate_club_loads() {
    let loaded =
        load_edge_list(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/karate.edges")).unwrap();
    let g = &loaded.graph;
    assert_eq!(g.node_count(), 34);
    assert_eq!(g.edge_count(), 78);
    assert_eq!(g.total_degree(), 156.0);
    assert_eq!(g.degree(0), 16.0);
    assert_eq!(g.degree(33), 17.0);
}
