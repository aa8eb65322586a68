//! Invariants of the linear programs and the solvers built on them.

use circlecolor::formulations::{build_cg, build_cl, build_as, build_dlc, build_fcp, build_isd, build_lc};
use circlecolor::oracle::{chromatic_exact, fractional_chromatic_exact, OracleBudget};
use circlecolor::stowage::LayeredDag;
use circlecolor::{
    build_cgh, decode_arborescence, read_lp, read_mps, solve_chromatic, solve_lp, solve_stacks, validate_coloring,
    write_lp, write_mps, Arborescence, CircleGraph, ContainmentDag, IntervalRepresentation, LpModel, LpSolution, Node,
    Relation, Sense, VarRole,
};
use proptest::prelude::*;

const TOL: f64 = 1e-6;

fn rep_strategy(max_n: usize) -> impl Strategy<Value = IntervalRepresentation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((1..=2 * n as i64).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|seq| IntervalRepresentation::from_sequence(&seq).unwrap())
}

fn lp_value(model: &LpModel) -> f64 {
    let sol = solve_lp(model).unwrap();
    assert!(sol.is_optimal(), "{} ended {:?}", model.name, sol.status);
    sol.objective
}

fn relabel(rep: &IntervalRepresentation, perm: &[usize]) -> IntervalRepresentation {
    let raw: Vec<(i64, i64)> = perm
        .iter()
        .map(|&v| {
            let iv = rep.interval(v);
            (i64::from(iv.left), i64::from(iv.right))
        })
        .collect();
    IntervalRepresentation::normalize(&raw).unwrap()
}

type Terms = Vec<(String, f64)>;

/// Objective and rows as name-keyed term lists, so models that number
/// their variables differently still compare equal.
fn canonical(model: &LpModel) -> (Terms, Vec<(String, Terms, String, f64)>, Vec<String>) {
    let named = |terms: &[(usize, f64)]| {
        let mut t: Vec<(String, f64)> = terms.iter().map(|&(j, a)| (model.variables[j].name.clone(), a)).collect();
        t.sort_by(|a, b| a.0.cmp(&b.0));
        t
    };
    let rows = model
        .constraints
        .iter()
        .map(|c| (c.name.clone(), named(&c.terms), c.relation.to_string(), c.rhs))
        .collect();
    let mut vars: Vec<String> = model
        .variables
        .iter()
        .map(|v| format!("{} {:?} {} {}", v.name, v.kind, v.lower, v.upper))
        .collect();
    vars.sort();
    (named(&model.objective), rows, vars)
}

/// Dual feasibility and a zero duality gap for a model whose variables are
/// nonnegative or free and whose upper bounds are all infinite.
fn check_duals(model: &LpModel, sol: &LpSolution) -> Result<(), String> {
    const DTOL: f64 = 1e-7;
    let min = model.sense == Sense::Minimize;
    for (c, &y) in model.constraints.iter().zip(&sol.dual) {
        let wrong = match (c.relation, min) {
            (Relation::Le, true) | (Relation::Ge, false) => y > DTOL,
            (Relation::Ge, true) | (Relation::Le, false) => y < -DTOL,
            (Relation::Eq, _) => false,
        };
        if wrong {
            return Err(format!("{}: dual {y} has the wrong sign", c.name));
        }
    }
    let mut reduced: Vec<f64> = vec![0.0; model.num_variables()];
    for &(j, a) in &model.objective {
        reduced[j] += a;
    }
    for (c, &y) in model.constraints.iter().zip(&sol.dual) {
        for &(j, a) in &c.terms {
            reduced[j] -= a * y;
        }
    }
    for (v, &d) in model.variables.iter().zip(&reduced) {
        let wrong = if v.lower == f64::NEG_INFINITY {
            d.abs() > DTOL
        } else if min {
            d < -DTOL
        } else {
            d > DTOL
        };
        if wrong {
            return Err(format!("{}: reduced cost {d}", v.name));
        }
    }
    let dual_objective: f64 = model.constraints.iter().zip(&sol.dual).map(|(c, y)| c.rhs * y).sum();
    if (dual_objective - sol.objective).abs() > DTOL {
        return Err(format!("primal {} vs dual {dual_objective}", sol.objective));
    }
    Ok(())
}

/// The same program with rows and columns reordered.
fn permuted(model: &LpModel, rows: &[usize], cols: &[usize]) -> LpModel {
    let mut out = LpModel::new(model.name.clone(), model.formulation, model.sense);
    let mut new_index = vec![0; cols.len()];
    for &j in cols {
        let v = &model.variables[j];
        new_index[j] = out.add_variable(v.name.clone(), v.kind, v.lower, v.upper, VarRole::Other).unwrap();
    }
    let remap = |terms: &[(usize, f64)]| terms.iter().map(|&(j, a)| (new_index[j], a)).collect::<Vec<_>>();
    out.set_objective(remap(&model.objective));
    for &r in rows {
        let c = &model.constraints[r];
        out.add_constraint(c.name.clone(), remap(&c.terms), c.relation, c.rhs);
    }
    out
}

fn shuffled(len: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    let mut state = seed | 1;
    for i in (1..len).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        order.swap(i, (state % (i as u64 + 1)) as usize);
    }
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lc_and_dlc_share_an_optimum(
        (rep, values, pick) in rep_strategy(12).prop_flat_map(|rep| {
            let n = rep.len();
            (Just(rep), proptest::collection::vec(0u8..=9, n), any::<usize>())
        })
    ) {
        let dag = ContainmentDag::new(&rep);
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let mut nodes = vec![Node::Root];
        nodes.extend(dag.branching().iter().map(|&v| Node::Vertex(v)));
        let node = nodes[pick % nodes.len()];
        let primal = lp_value(&build_lc(&rep, &dag, node, &values).unwrap());
        let dual = lp_value(&build_dlc(&rep, &dag, node, &values).unwrap());
        prop_assert!((primal - dual).abs() < TOL, "LC {primal} vs DLC {dual}");
    }

    #[test]
    fn isd_is_the_mwis_value(
        (rep, weights) in rep_strategy(12).prop_flat_map(|rep| {
            let n = rep.len();
            (Just(rep), proptest::collection::vec(-5i32..=5, n))
        })
    ) {
        let dag = ContainmentDag::new(&rep);
        let weights: Vec<f64> = weights.into_iter().map(f64::from).collect();
        let isd = lp_value(&build_isd(&rep, &dag, &weights).unwrap());
        let dp = circlecolor::solve_mwis(&rep, &dag, &weights).value;
        prop_assert!((isd - dp).abs() < TOL);
    }

    #[test]
    fn fcp_is_the_cg_relaxation(rep in rep_strategy(12)) {
        let dag = ContainmentDag::new(&rep);
        let cg = lp_value(&build_cg(&rep, &dag, true));
        let fcp = lp_value(&build_fcp(&rep, &dag));
        prop_assert!((cg - fcp).abs() < TOL, "CG {cg} vs FCP {fcp}");
    }

    #[test]
    fn bounds_sandwich_the_chromatic_number(rep in rep_strategy(11)) {
        let graph = CircleGraph::from_intervals(&rep);
        let report = solve_chromatic(&rep).unwrap();
        let budget = OracleBudget::default();
        let chi_f = fractional_chromatic_exact(&graph, &budget).unwrap();
        prop_assert!((report.fractional_chromatic - chi_f).abs() < TOL);
        prop_assert!(report.fractional_chromatic <= report.chromatic_number as f64 + TOL);
        prop_assert_eq!(report.chromatic_number, chromatic_exact(&graph, &budget).unwrap());
        prop_assert_eq!(report.coloring.num_colors(), report.chromatic_number);
    }

    #[test]
    fn relabeling_vertices_changes_nothing(
        (rep, perm) in rep_strategy(12).prop_flat_map(|rep| {
            let n = rep.len();
            (Just(rep), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let other = relabel(&rep, &perm);
        let a = solve_chromatic(&rep).unwrap();
        let b = solve_chromatic(&other).unwrap();
        prop_assert_eq!(a.chromatic_number, b.chromatic_number);
        prop_assert!((a.fractional_chromatic - b.fractional_chromatic).abs() < TOL);
        prop_assert_eq!(
            CircleGraph::from_intervals(&rep).edge_count(),
            CircleGraph::from_intervals(&other).edge_count()
        );
    }

    #[test]
    fn stacks_shrink_with_height_down_to_chi(rep in rep_strategy(9)) {
        let chi = solve_chromatic(&rep).unwrap().chromatic_number;
        let depth = ContainmentDag::new(&rep).depth();
        let mut previous = usize::MAX;
        for h in 1..=depth + 1 {
            let report = solve_stacks(&rep, h).unwrap();
            prop_assert!(report.stacks <= previous);
            prop_assert!(report.stacks >= chi);
            prop_assert!(report.plan.is_valid(&rep, &CircleGraph::from_intervals(&rep), h));
            previous = report.stacks;
        }
        prop_assert_eq!(previous, chi);
    }

    #[test]
    fn heights_beyond_the_depth_do_not_help(rep in rep_strategy(8)) {
        let depth = ContainmentDag::new(&rep).depth();
        let at = |h: usize| lp_value(&build_cgh(&rep, &LayeredDag::new(&rep, h).unwrap(), true));
        prop_assert!((at(depth) - at(depth + 2)).abs() < TOL);
    }

    #[test]
    fn exports_reparse_to_the_same_model(rep in rep_strategy(7)) {
        let graph = CircleGraph::from_intervals(&rep);
        let dag = ContainmentDag::new(&rep);
        let weights: Vec<f64> = (0..rep.len()).map(|v| v as f64 - 2.5).collect();
        let models = [
            build_cg(&rep, &dag, false),
            build_fcp(&rep, &dag),
            build_isd(&rep, &dag, &weights).unwrap(),
            build_cl(&graph, 3),
            build_as(&graph),
            build_cgh(&rep, &LayeredDag::new(&rep, 2).unwrap(), false),
        ];
        for model in &models {
            let lp = read_lp(&write_lp(model)).unwrap();
            prop_assert_eq!(lp.sense, model.sense);
            prop_assert_eq!(canonical(&lp), canonical(model));
            let mps = read_mps(&write_mps(model)).unwrap();
            prop_assert_eq!(mps.sense, model.sense);
            prop_assert_eq!(canonical(&mps), canonical(model));
            prop_assert_eq!(&mps.variables, &model.variables);
        }
    }

    #[test]
    fn simplex_duals_close_the_gap(
        (rep, weights) in rep_strategy(12).prop_flat_map(|rep| {
            let n = rep.len();
            (Just(rep), proptest::collection::vec(-5i32..=5, n))
        })
    ) {
        let dag = ContainmentDag::new(&rep);
        let weights: Vec<f64> = weights.into_iter().map(f64::from).collect();
        let positive: Vec<f64> = weights.iter().map(|w| w.abs() + 1.0).collect();
        let models = [
            build_cg(&rep, &dag, true),
            build_fcp(&rep, &dag),
            build_isd(&rep, &dag, &weights).unwrap(),
            build_lc(&rep, &dag, Node::Root, &positive).unwrap(),
            build_dlc(&rep, &dag, Node::Root, &positive).unwrap(),
        ];
        for model in &models {
            let sol = solve_lp(model).unwrap();
            prop_assert!(sol.is_optimal());
            if let Err(e) = check_duals(model, &sol) {
                return Err(TestCaseError::fail(format!("{}: {e}", model.name)));
            }
        }
    }

    #[test]
    fn reordering_rows_and_columns_keeps_the_optimum(rep in rep_strategy(12), seed in any::<u64>()) {
        let dag = ContainmentDag::new(&rep);
        for model in [build_cg(&rep, &dag, true), build_fcp(&rep, &dag)] {
            let rows = shuffled(model.num_constraints(), seed);
            let cols = shuffled(model.num_variables(), seed.rotate_left(17));
            let a = lp_value(&model);
            let b = lp_value(&permuted(&model, &rows, &cols));
            prop_assert!((a - b).abs() < 1e-8, "{}: {a} vs {b}", model.name);
        }
    }

    #[test]
    fn optimal_colorings_re_decode_with_the_same_count(rep in rep_strategy(14)) {
        let graph = CircleGraph::from_intervals(&rep);
        let report = solve_chromatic(&rep).unwrap();
        let chi = report.chromatic_number;
        let tree = Arborescence::from_coloring(&rep, report.coloring.colors());
        let again = decode_arborescence(&rep, &ContainmentDag::new(&rep), &tree, chi).unwrap();
        prop_assert_eq!(validate_coloring(&graph, &again), Ok(true));
        prop_assert_eq!(again.num_colors(), chi);
    }
}
