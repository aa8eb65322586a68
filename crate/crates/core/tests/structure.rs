//! Invariants of the interval model: poset, overlap graph, containment DAG,
//! clique rows, chains and the arborescence decoder.

use circlecolor::bnb::first_fit_by_left;
use circlecolor::clique::CliqueMatrix;
use circlecolor::instances::{certificate_text, parse_certificate};
use circlecolor::oracle::{mwis_exact, OracleBudget};
use circlecolor::{
    chain_partition, decode_arborescence, max_antichain, solve_mwis, validate_coloring, Arborescence, CircleGraph,
    ContainmentDag, IntervalRepresentation, Node,
};
use proptest::prelude::*;

fn rep_strategy(max_n: usize) -> impl Strategy<Value = IntervalRepresentation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((1..=2 * n as i64).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|seq| IntervalRepresentation::from_sequence(&seq).unwrap())
}

fn with_subset(max_n: usize) -> impl Strategy<Value = (IntervalRepresentation, Vec<usize>)> {
    rep_strategy(max_n).prop_flat_map(|rep| {
        let n = rep.len();
        (Just(rep), proptest::collection::vec(any::<bool>(), n))
            .prop_map(|(rep, mask)| {
                let subset = (0..rep.len()).filter(|&v| mask[v]).collect();
                (rep, subset)
            })
    })
}

fn mask(n: usize, subset: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in subset {
        m[v] = true;
    }
    m
}

/// Largest pairwise-intersecting family by checking every subset.
fn brute_antichain(rep: &IntervalRepresentation, subset: &[usize]) -> usize {
    let k = subset.len();
    (0u32..1 << k)
        .filter(|bits| {
            let members: Vec<usize> = (0..k).filter(|&i| bits >> i & 1 == 1).map(|i| subset[i]).collect();
            members
                .iter()
                .all(|&a| members.iter().all(|&b| a == b || !rep.comparable(a, b)))
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

proptest! {
    #[test]
    fn normalized_endpoints_are_a_permutation(rep in rep_strategy(15)) {
        let mut ends: Vec<u32> = rep.intervals().iter().flat_map(|iv| [iv.left, iv.right]).collect();
        ends.sort_unstable();
        prop_assert_eq!(ends, (1..=2 * rep.len() as u32).collect::<Vec<_>>());
        prop_assert_eq!(IntervalRepresentation::parse(&rep.to_text()).unwrap(), rep);
    }

    #[test]
    fn poset_is_a_partial_order_and_chains_are_independent(rep in rep_strategy(10)) {
        let n = rep.len();
        let graph = CircleGraph::from_intervals(&rep);
        for a in 0..n {
            prop_assert!(rep.precedes(a, a));
            for b in 0..n {
                if a != b && rep.precedes(a, b) {
                    prop_assert!(!rep.precedes(b, a));
                    prop_assert!(!graph.adjacent(a, b));
                    for c in 0..n {
                        if rep.precedes(b, c) {
                            prop_assert!(rep.precedes(a, c));
                        }
                    }
                }
                let overlap = a != b && !rep.comparable(a, b) && !rep.contains(a, b) && !rep.contains(b, a);
                prop_assert_eq!(graph.adjacent(a, b), overlap);
            }
        }
    }

    #[test]
    fn dag_arcs_are_containments(rep in rep_strategy(12)) {
        let dag = ContainmentDag::new(&rep);
        for (from, to) in dag.arcs() {
            match from {
                Node::Root => {}
                Node::Vertex(i) => {
                    let (a, b) = (rep.interval(i), rep.interval(to));
                    prop_assert!(a.left < b.left && b.right < a.right);
                    prop_assert!(dag.is_branching(i));
                }
            }
        }
        prop_assert_eq!(dag.children(Node::Root).len(), rep.len());
        let pos: Vec<usize> = {
            let mut p = vec![0; rep.len()];
            for (k, &v) in dag.topological_order().iter().enumerate() {
                p[v] = k;
            }
            p
        };
        for (from, to) in dag.arcs() {
            if let Node::Vertex(i) = from {
                prop_assert!(pos[i] < pos[to]);
            }
        }
    }

    #[test]
    fn clique_rows_measure_antichains((rep, subset) in with_subset(10)) {
        let selected = mask(rep.len(), &subset);
        let want = brute_antichain(&rep, &subset);
        prop_assert_eq!(CliqueMatrix::new(&rep).max_load(&selected), want);
        let all: Vec<usize> = (0..rep.len()).collect();
        prop_assert_eq!(CliqueMatrix::all_points(&rep, &all).max_load(&selected), want);
        prop_assert_eq!(max_antichain(&rep, &subset), want);
    }

    #[test]
    fn chain_partition_is_minimum((rep, subset) in with_subset(14)) {
        let chains = chain_partition(&rep, &subset);
        prop_assert_eq!(chains.len(), max_antichain(&rep, &subset));
        let mut seen: Vec<usize> = chains.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, subset);
        for chain in &chains {
            prop_assert!(rep.is_chain(chain));
        }
    }

    #[test]
    fn dp_mwis_matches_brute_force(
        (rep, weights) in rep_strategy(12).prop_flat_map(|rep| {
            let n = rep.len();
            (Just(rep), proptest::collection::vec(-5i32..=5, n))
        })
    ) {
        let weights: Vec<f64> = weights.into_iter().map(f64::from).collect();
        let graph = CircleGraph::from_intervals(&rep);
        let sol = solve_mwis(&rep, &ContainmentDag::new(&rep), &weights);
        let brute = mwis_exact(&graph, &weights, &OracleBudget::default()).unwrap();
        prop_assert!((sol.value - brute).abs() < 1e-9);
        prop_assert!(graph.is_independent(&sol.set));
        let total: f64 = sol.set.iter().map(|&v| weights[v]).sum();
        prop_assert!((total - sol.value).abs() < 1e-9);
    }

    #[test]
    fn first_fit_tree_decodes_to_a_proper_coloring(rep in rep_strategy(20)) {
        let graph = CircleGraph::from_intervals(&rep);
        let dag = ContainmentDag::new(&rep);
        let greedy = first_fit_by_left(&rep, &graph);
        prop_assert_eq!(validate_coloring(&graph, &greedy), Ok(true));
        let tree = Arborescence::from_coloring(&rep, greedy.colors());
        prop_assert!(tree.check_arcs(&dag).is_ok());
        let decoded = decode_arborescence(&rep, &dag, &tree, greedy.num_colors()).unwrap();
        prop_assert_eq!(validate_coloring(&graph, &decoded), Ok(true));
        prop_assert!(decoded.num_colors() <= greedy.num_colors());
    }

    #[test]
    fn flat_tree_needs_the_root_antichain(rep in rep_strategy(20)) {
        let dag = ContainmentDag::new(&rep);
        let all: Vec<usize> = (0..rep.len()).collect();
        let width = max_antichain(&rep, &all);
        let flat = Arborescence::flat(rep.len());
        let coloring = decode_arborescence(&rep, &dag, &flat, width).unwrap();
        prop_assert_eq!(coloring.num_colors(), width);
        prop_assert!(decode_arborescence(&rep, &dag, &flat, width - 1).is_err());
    }

    #[test]
    fn certificate_round_trip(rep in rep_strategy(15)) {
        let graph = CircleGraph::from_intervals(&rep);
        let greedy = first_fit_by_left(&rep, &graph);
        let text = certificate_text(&rep, &greedy);
        let back = parse_certificate(&text, rep.len()).unwrap();
        prop_assert_eq!(back.colors(), greedy.colors());
        prop_assert_eq!(certificate_text(&rep, &back), text);
    }

    #[test]
    fn adjacency_survives_rank_compression(rep in rep_strategy(12), scale in 1i64..50, shift in -100i64..100) {
        let stretched: Vec<(i64, i64)> = rep
            .intervals()
            .iter()
            .map(|iv| (i64::from(iv.right) * scale + shift, i64::from(iv.left) * scale + shift))
            .collect();
        let back = IntervalRepresentation::normalize(&stretched).unwrap();
        prop_assert_eq!(&back, &rep);
        prop_assert_eq!(CircleGraph::from_intervals(&back).edges(), CircleGraph::from_intervals(&rep).edges());
    }
}
