//! Property suites cross-checking the fast implementations against slow
//! enumeration oracles and algebraic identities.

use num_bigint::BigInt;
use proptest::prelude::*;

use graphext::linalg::{smith_normal_form, verify_smith, CokernelPresentation};
use graphext::oracle;
use graphext::tails::{is_maximal_tail, maximal_tails, saturated_closure};
use graphext::{Edge, Graph, IntMatrix, IntVector, PathCount};

fn graph_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<Edge> = pairs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| Edge {
            id: format!("e{k}"),
            src: format!("v{a}"),
            dst: format!("v{b}"),
        })
        .collect();
    Graph::new(vertices, edges).unwrap()
}

fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (1..=max_v).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_e)
            .prop_map(move |pairs| graph_from_pairs(n, &pairs))
    })
}

fn arb_no_sink_graph(max_v: usize, max_extra: usize) -> impl Strategy<Value = Graph> {
    (1..=max_v).prop_flat_map(move |n| {
        (
            proptest::collection::vec(0..n, n),
            proptest::collection::vec((0..n, 0..n), 0..=max_extra),
        )
            .prop_map(move |(forced, extra)| {
                let mut pairs: Vec<(usize, usize)> =
                    forced.iter().enumerate().map(|(i, &t)| (i, t)).collect();
                pairs.extend(extra);
                graph_from_pairs(n, &pairs)
            })
    })
}

fn arb_dag(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (2..=max_v).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |raw| {
            let pairs: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            graph_from_pairs(n, &pairs)
        })
    })
}

fn arb_matrix(max_dim: usize, max_abs: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-max_abs..=max_abs, c), r).prop_map(
            |rows| {
                IntMatrix::from_entries(
                    rows.into_iter()
                        .map(|row| row.into_iter().map(BigInt::from).collect())
                        .collect(),
                )
                .unwrap()
            },
        )
    })
}

/// Matrix together with vectors compatible with its rows.
fn arb_matrix_and_row_vectors(
    count: usize,
) -> impl Strategy<Value = (IntMatrix, Vec<IntVector>)> {
    arb_matrix(4, 6).prop_flat_map(move |m| {
        let rows = m.n_rows();
        let labels: Vec<String> = m.row_labels().to_vec();
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, rows), count).prop_map(
            move |vs| {
                let vectors = vs
                    .into_iter()
                    .map(|v| {
                        IntVector::new(labels.clone(), v.into_iter().map(BigInt::from).collect())
                            .unwrap()
                    })
                    .collect();
                (m.clone(), vectors)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_invariants_hold(m in arb_matrix(5, 20)) {
        let snf = smith_normal_form(&m);
        prop_assert!(verify_smith(&m, &snf).is_ok());
    }

    #[test]
    fn snf_is_deterministic(m in arb_matrix(4, 9)) {
        prop_assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    #[test]
    fn planted_solutions_are_found(
        (m, z_entries) in arb_matrix(5, 5).prop_flat_map(|m| {
            let cols = m.n_cols();
            (Just(m), proptest::collection::vec(-3i64..=3, cols))
        })
    ) {
        let z = IntVector::new(
            m.col_labels().to_vec(),
            z_entries.into_iter().map(BigInt::from).collect(),
        ).unwrap();
        let b = m.mul_vec(&z).unwrap();
        let pres = CokernelPresentation::new(m.clone());
        let result = pres.in_image(&b).unwrap();
        let certificate = result.certificate().expect("planted system is solvable");
        prop_assert_eq!(m.mul_vec(certificate).unwrap(), b);
    }

    #[test]
    fn refusals_carry_verifiable_obstructions(
        (m, vectors) in arb_matrix_and_row_vectors(1)
    ) {
        let pres = CokernelPresentation::new(m.clone());
        let b = &vectors[0];
        if let Some(obs) = pres.in_image(b).unwrap().obstruction() {
            prop_assert!(obs.verify(&m, b));
        }
    }

    #[test]
    fn class_equality_is_an_equivalence(
        (m, vectors) in arb_matrix_and_row_vectors(3)
    ) {
        let pres = CokernelPresentation::new(m.clone());
        let (x, y, z) = (&vectors[0], &vectors[1], &vectors[2]);
        prop_assert!(pres.classes_equal(x, x).unwrap().equal);
        prop_assert_eq!(
            pres.classes_equal(x, y).unwrap().equal,
            pres.classes_equal(y, x).unwrap().equal
        );
        if pres.classes_equal(x, y).unwrap().equal && pres.classes_equal(y, z).unwrap().equal {
            prop_assert!(pres.classes_equal(x, z).unwrap().equal);
        }
    }

    #[test]
    fn canonical_coordinates_match_solvability(
        (m, vectors) in arb_matrix_and_row_vectors(2)
    ) {
        let pres = CokernelPresentation::new(m.clone());
        let (x, y) = (&vectors[0], &vectors[1]);
        prop_assert_eq!(
            pres.classes_equal(x, y).unwrap().equal,
            pres.class_of(x).unwrap() == pres.class_of(y).unwrap()
        );
    }

    #[test]
    fn reaches_is_reflexive_transitive_and_matches_walks(g in arb_graph(8, 16)) {
        let n = g.vertex_count();
        let ids: Vec<&String> = g.vertices().iter().collect();
        let mut table = vec![vec![false; n]; n];
        for (i, v) in ids.iter().enumerate() {
            for (j, w) in ids.iter().enumerate() {
                table[i][j] = g.reaches(v, w).unwrap();
                prop_assert_eq!(
                    table[i][j],
                    oracle::walk_exists_up_to(&g, v, w, n),
                    "walk oracle disagrees on {} -> {}", v, w
                );
            }
            prop_assert!(table[i][i]);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[a][b] && table[b][c] {
                        prop_assert!(table[a][c]);
                    }
                }
            }
        }
    }

    #[test]
    fn source_matrix_intertwines_edge_and_vertex_matrices(g in arb_graph(8, 20)) {
        let s = g.source_matrix();
        let b_minus = g.edge_matrix().minus_identity().unwrap();
        let a_minus = g.vertex_matrix().minus_identity().unwrap();
        prop_assert_eq!(s.mul(&b_minus).unwrap(), a_minus.mul(&s).unwrap());
    }

    #[test]
    fn condition_k_matches_loop_enumeration(g in arb_graph(6, 12)) {
        prop_assert_eq!(g.condition_k().holds, oracle::condition_k_by_enumeration(&g));
    }

    #[test]
    fn condition_l_matches_loop_enumeration(g in arb_graph(7, 12)) {
        prop_assert_eq!(g.condition_l().holds, oracle::condition_l_by_enumeration(&g));
    }

    #[test]
    fn count_paths_matches_dfs_on_dags(g in arb_dag(8, 14)) {
        let from = g.vertices()[0].clone();
        for to in g.vertices() {
            let expected = oracle::paths_by_dfs(&g, &from, to, g.vertex_count())
                .expect("dags have bounded walks");
            match g.count_paths(&from, to).unwrap() {
                PathCount::Finite(c) => prop_assert_eq!(c, expected.into()),
                PathCount::Infinite => prop_assert!(false, "dag reported an infinite count"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tails_match_subset_enumeration(g in arb_graph(6, 10)) {
        let fast: Vec<Vec<String>> = maximal_tails(&g)
            .iter()
            .map(|t| t.vertices().to_vec())
            .collect();
        let slow = oracle::maximal_tails_by_enumeration(&g);
        let mut fast_sorted = fast.clone();
        fast_sorted.sort();
        let mut slow_sorted = slow.clone();
        slow_sorted.sort();
        prop_assert_eq!(fast_sorted, slow_sorted);
        for t in maximal_tails(&g) {
            prop_assert!(is_maximal_tail(&g, t.vertices()).unwrap());
        }
    }

    #[test]
    fn saturated_closure_is_a_closure_operator(
        (g, seed_bits, extra_bits) in arb_graph(7, 12).prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g),
             proptest::collection::vec(proptest::bool::ANY, n),
             proptest::collection::vec(proptest::bool::ANY, n))
        })
    ) {
        let seed: Vec<&str> = g.vertices().iter().zip(&seed_bits)
            .filter(|(_, &b)| b).map(|(v, _)| v.as_str()).collect();
        let closed = saturated_closure(&g, &seed).unwrap();
        // extensive
        for v in &seed {
            prop_assert!(closed.contains(v));
        }
        // idempotent
        let again = saturated_closure(&g, closed.vertices()).unwrap();
        prop_assert_eq!(&again, &closed);
        // monotone against a larger seed
        let bigger: Vec<&str> = g.vertices().iter().zip(&seed_bits).zip(&extra_bits)
            .filter(|((_, &a), &b)| a || b).map(|((v, _), _)| v.as_str()).collect();
        let closed_bigger = saturated_closure(&g, &bigger).unwrap();
        for v in closed.vertices() {
            prop_assert!(closed_bigger.contains(v));
        }
    }

    #[test]
    fn source_matrix_induces_cokernel_isomorphism(g in arb_no_sink_graph(5, 5)) {
        let r = graphext::induced_cokernel_map_check(
            &g.source_matrix(),
            &g.edge_matrix().minus_identity().unwrap(),
            &g.vertex_matrix().minus_identity().unwrap(),
        ).unwrap();
        prop_assert!(r.well_defined);
        prop_assert!(r.isomorphism);
    }

    #[test]
    fn matrix_json_round_trips(m in arb_matrix(4, 1_000_000)) {
        let text = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }
}
