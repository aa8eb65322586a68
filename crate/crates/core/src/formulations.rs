//! Builders for the coloring, independent-set and fractional-coloring
//! programs over a circle graph.
//!
//! Naming: vertex ids are 1-based in variable names and the root is `0`.
//! `x_i_j` is the arc `(i, j)` of the containment DAG, `c` the color count,
//! `y_i_p` the dual of sweep row `p` below node `i`, `ell_i` a label.

use thiserror::Error;

use crate::clique::CliqueMatrix;
use crate::coloring::{Arborescence, Coloring};
use crate::dag::{ContainmentDag, Node};
use crate::graph::CircleGraph;
use crate::interval::IntervalRepresentation;
use crate::model::{Formulation, LpModel, Relation, Sense, VarKind, VarRole};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulationError {
    #[error("vertex {0} contains no other interval")]
    VertexNotBranching(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

const INF: f64 = f64::INFINITY;

fn arc_name(from: Node, to: usize) -> String {
    format!("x_{}_{}", from.id(), to + 1)
}

/// Sweep rows of `M_i`: the full matrix for the root, the rows restricted
/// to `R_V(i)` otherwise.
pub fn node_rows(rep: &IntervalRepresentation, dag: &ContainmentDag, node: Node) -> CliqueMatrix {
    match node {
        Node::Root => CliqueMatrix::new(rep),
        Node::Vertex(_) => CliqueMatrix::restricted(rep, dag.children(node)),
    }
}

/// The arborescence program: `min c` subject to `M x^0 <= c`,
/// `M_i x^i <= 1` for branching `i`, and one entering arc per vertex.
/// With `relax` set, binaries become `[0, 1]` and `c` continuous.
pub fn build_cg(rep: &IntervalRepresentation, dag: &ContainmentDag, relax: bool) -> LpModel {
    let name = if relax { "cg_relaxed" } else { "cg" };
    let mut model = LpModel::new(name, Formulation::Cg, Sense::Minimize);
    let (xkind, ckind) = if relax {
        (VarKind::Continuous, VarKind::Continuous)
    } else {
        (VarKind::Binary, VarKind::Integer)
    };
    let n = rep.len();
    let mut arc_var = vec![Vec::new(); n + 1];
    for (from, to) in dag.arcs() {
        let idx = model
            .add_variable(arc_name(from, to), xkind, 0.0, 1.0, VarRole::Arc { from, to })
            .expect("arc names are unique");
        arc_var[from.id()].push((to, idx));
    }
    let c = model
        .add_variable("c", ckind, 0.0, INF, VarRole::ColorCount)
        .expect("c is unique");
    model.set_objective(vec![(c, 1.0)]);

    let lookup = |from: Node, to: usize, arc_var: &[Vec<(usize, usize)>]| {
        arc_var[from.id()]
            .iter()
            .find(|&&(t, _)| t == to)
            .map(|&(_, idx)| idx)
            .expect("row member is a child")
    };
    for row in CliqueMatrix::new(rep).rows() {
        let mut terms: Vec<(usize, f64)> = row
            .members
            .iter()
            .map(|&j| (lookup(Node::Root, j, &arc_var), 1.0))
            .collect();
        terms.push((c, -1.0));
        model.add_constraint(format!("root_p{}", row.point), terms, Relation::Le, 0.0);
    }
    for &i in dag.branching() {
        let node = Node::Vertex(i);
        for row in node_rows(rep, dag, node).rows() {
            let terms = row
                .members
                .iter()
                .map(|&j| (lookup(node, j, &arc_var), 1.0))
                .collect();
            model.add_constraint(format!("chain_{}_p{}", i + 1, row.point), terms, Relation::Le, 1.0);
        }
    }
    for j in 0..n {
        let terms = dag
            .in_arcs(j)
            .map(|from| (lookup(from, j, &arc_var), 1.0))
            .collect();
        model.add_constraint(format!("assign_{}", j + 1), terms, Relation::Eq, 1.0);
    }
    model
}

/// CG variable values for an arborescence and a color count.
pub fn cg_solution(model: &LpModel, tree: &Arborescence, c: usize) -> Vec<f64> {
    let mut x = vec![0.0; model.num_variables()];
    for (from, to) in tree.arcs() {
        if let Some(idx) = model.var_by_role(&VarRole::Arc { from, to }) {
            x[idx] = 1.0;
        }
    }
    if let Some(idx) = model.var_by_role(&VarRole::ColorCount) {
        x[idx] = c as f64;
    }
    x
}

fn check_branching(dag: &ContainmentDag, node: Node) -> Result<(), FormulationError> {
    match node {
        Node::Vertex(v) if v >= dag.n() || !dag.is_branching(v) => {
            Err(FormulationError::VertexNotBranching(v))
        }
        _ => Ok(()),
    }
}

fn check_len(values: &[f64], n: usize) -> Result<(), FormulationError> {
    if values.len() != n {
        return Err(FormulationError::LengthMismatch {
            expected: n,
            got: values.len(),
        });
    }
    Ok(())
}

/// `LC_i(ell)`: `max sum ell_j x_j` over `M_i x <= 1, x >= 0` for the
/// children `j` of `node`.
pub fn build_lc(
    rep: &IntervalRepresentation,
    dag: &ContainmentDag,
    node: Node,
    values: &[f64],
) -> Result<LpModel, FormulationError> {
    check_branching(dag, node)?;
    check_len(values, rep.len())?;
    let mut model = LpModel::new(format!("lc_{}", node.id()), Formulation::Lc, Sense::Maximize);
    let mut var_of = vec![usize::MAX; rep.len()];
    let mut objective = Vec::new();
    for &j in dag.children(node) {
        let idx = model
            .add_variable(
                arc_name(node, j),
                VarKind::Continuous,
                0.0,
                INF,
                VarRole::Arc { from: node, to: j },
            )
            .expect("unique");
        var_of[j] = idx;
        objective.push((idx, values[j]));
    }
    model.set_objective(objective);
    for row in node_rows(rep, dag, node).rows() {
        let terms = row.members.iter().map(|&j| (var_of[j], 1.0)).collect();
        model.add_constraint(format!("row_p{}", row.point), terms, Relation::Le, 1.0);
    }
    Ok(model)
}

/// `DLC_i(ell)`: `min sum_p y_p` with `sum_{p in I(j)} y_p >= ell_j` for
/// every child `j` of `node`.
pub fn build_dlc(
    rep: &IntervalRepresentation,
    dag: &ContainmentDag,
    node: Node,
    values: &[f64],
) -> Result<LpModel, FormulationError> {
    check_branching(dag, node)?;
    check_len(values, rep.len())?;
    let mut model = LpModel::new(format!("dlc_{}", node.id()), Formulation::Dlc, Sense::Minimize);
    let rows = node_rows(rep, dag, node);
    let ys = add_row_duals(&mut model, node, &rows);
    model.set_objective(ys.iter().map(|&y| (y, 1.0)).collect());
    let support = rows.column_support(rep.len());
    for &j in dag.children(node) {
        let terms = support[j].iter().map(|&r| (ys[r], 1.0)).collect();
        model.add_constraint(format!("cover_{}", j + 1), terms, Relation::Ge, values[j]);
    }
    Ok(model)
}

fn add_row_duals(model: &mut LpModel, owner: Node, rows: &CliqueMatrix) -> Vec<usize> {
    rows.rows()
        .iter()
        .map(|row| {
            model
                .add_variable(
                    format!("y_{}_{}", owner.id(), row.point),
                    VarKind::Continuous,
                    0.0,
                    INF,
                    VarRole::RowDual {
                        owner,
                        point: row.point,
                    },
                )
                .expect("unique")
        })
        .collect()
}

/// Shared part of the independent-set dual and the fractional coloring
/// program: free labels, row duals per node and one covering row per arc.
struct DualSkeleton {
    model: LpModel,
    ell: Vec<usize>,
    // Row-dual variables of the root, then of each branching vertex.
    root_y: Vec<usize>,
    vertex_y: Vec<(usize, Vec<usize>)>,
}

fn dual_skeleton(
    rep: &IntervalRepresentation,
    dag: &ContainmentDag,
    name: &str,
    formulation: Formulation,
    sense: Sense,
) -> DualSkeleton {
    let n = rep.len();
    let mut model = LpModel::new(name, formulation, sense);
    let ell: Vec<usize> = (0..n)
        .map(|v| {
            model
                .add_variable(
                    format!("ell_{}", v + 1),
                    VarKind::Continuous,
                    -INF,
                    INF,
                    VarRole::Label { vertex: v },
                )
                .expect("unique")
        })
        .collect();
    let mut owners = vec![Node::Root];
    owners.extend(dag.branching().iter().map(|&i| Node::Vertex(i)));
    let mut root_y = Vec::new();
    let mut vertex_y = Vec::new();
    let mut covers = Vec::new();
    for owner in owners {
        let rows = node_rows(rep, dag, owner);
        let ys = add_row_duals(&mut model, owner, &rows);
        let support = rows.column_support(n);
        for &j in dag.children(owner) {
            let mut terms: Vec<(usize, f64)> = support[j].iter().map(|&r| (ys[r], 1.0)).collect();
            terms.push((ell[j], -1.0));
            covers.push((format!("arc_{}_{}", owner.id(), j + 1), terms));
        }
        match owner {
            Node::Root => root_y = ys,
            Node::Vertex(i) => vertex_y.push((i, ys)),
        }
    }
    for (name, terms) in covers {
        model.add_constraint(name, terms, Relation::Ge, 0.0);
    }
    DualSkeleton {
        model,
        ell,
        root_y,
        vertex_y,
    }
}

/// The flat LP whose optimum is the maximum weight of an independent set:
/// `min sum_p y_0p` with `ell_i = w_i + sum_p y_ip` on branching vertices,
/// `ell_i = w_i` elsewhere, and `sum_{p in I(j)} y_ip >= ell_j` per arc.
pub fn build_isd(
    rep: &IntervalRepresentation,
    dag: &ContainmentDag,
    weights: &[f64],
) -> Result<LpModel, FormulationError> {
    check_len(weights, rep.len())?;
    let DualSkeleton {
        mut model,
        ell,
        root_y,
        vertex_y,
    } = dual_skeleton(rep, dag, "isd", Formulation::Isd, Sense::Minimize);
    model.set_objective(root_y.iter().map(|&y| (y, 1.0)).collect());
    let mut ys_of: Vec<Option<&Vec<usize>>> = vec![None; rep.len()];
    for (i, ys) in &vertex_y {
        ys_of[*i] = Some(ys);
    }
    for v in 0..rep.len() {
        let mut terms = vec![(ell[v], 1.0)];
        if let Some(ys) = ys_of[v] {
            terms.extend(ys.iter().map(|&y| (y, -1.0)));
        }
        model.add_constraint(format!("label_{}", v + 1), terms, Relation::Eq, weights[v]);
    }
    Ok(model)
}

/// The fractional coloring program, dual to the relaxation of
/// [`build_cg`]: `max sum_j ell_j - sum_{i branching} sum_p y_ip` with
/// `sum_p y_0p <= 1` and `sum_{p in I(j)} y_ip >= ell_j` per arc.
pub fn build_fcp(rep: &IntervalRepresentation, dag: &ContainmentDag) -> LpModel {
    let DualSkeleton {
        mut model,
        ell,
        root_y,
        vertex_y,
    } = dual_skeleton(rep, dag, "fcp", Formulation::Fcp, Sense::Maximize);
    let mut objective: Vec<(usize, f64)> = ell.iter().map(|&l| (l, 1.0)).collect();
    for (_, ys) in &vertex_y {
        objective.extend(ys.iter().map(|&y| (y, -1.0)));
    }
    model.set_objective(objective);
    model.add_constraint("budget", root_y.iter().map(|&y| (y, 1.0)).collect(), Relation::Le, 1.0);
    model
}

/// Assignment formulation with `colors` available colors.
pub fn build_cl(graph: &CircleGraph, colors: usize) -> LpModel {
    let n = graph.n();
    let mut model = LpModel::new("cl", Formulation::Cl, Sense::Minimize);
    let x: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (1..=colors)
                .map(|c| {
                    model
                        .add_variable(
                            format!("x_{}_{}", i + 1, c),
                            VarKind::Binary,
                            0.0,
                            1.0,
                            VarRole::Assign { vertex: i, color: c },
                        )
                        .expect("unique")
                })
                .collect()
        })
        .collect();
    let y: Vec<usize> = (1..=colors)
        .map(|c| {
            model
                .add_variable(format!("y_{c}"), VarKind::Binary, 0.0, 1.0, VarRole::ColorUsed { color: c })
                .expect("unique")
        })
        .collect();
    model.set_objective(y.iter().map(|&v| (v, 1.0)).collect());
    for i in 0..n {
        for c in 0..colors {
            model.add_constraint(
                format!("use_{}_{}", i + 1, c + 1),
                vec![(x[i][c], 1.0), (y[c], -1.0)],
                Relation::Le,
                0.0,
            );
        }
    }
    for (i, k) in graph.edges() {
        for c in 0..colors {
            model.add_constraint(
                format!("edge_{}_{}_{}", i + 1, k + 1, c + 1),
                vec![(x[i][c], 1.0), (x[k][c], 1.0)],
                Relation::Le,
                1.0,
            );
        }
    }
    for (i, xi) in x.iter().enumerate() {
        model.add_constraint(
            format!("cover_{}", i + 1),
            xi.iter().map(|&v| (v, 1.0)).collect(),
            Relation::Ge,
            1.0,
        );
    }
    model
}

pub fn cl_solution(model: &LpModel, coloring: &Coloring) -> Vec<f64> {
    let mut x = vec![0.0; model.num_variables()];
    for (v, &c) in coloring.colors().iter().enumerate() {
        if let Some(idx) = model.var_by_role(&VarRole::Assign { vertex: v, color: c }) {
            x[idx] = 1.0;
        }
        if let Some(idx) = model.var_by_role(&VarRole::ColorUsed { color: c }) {
            x[idx] = 1.0;
        }
    }
    x
}

/// Vertices by non-increasing degree, ties by ascending index.
pub fn degree_order(graph: &CircleGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    order
}

/// Representatives formulation over the degree order: `x_ij = 1` when `i`
/// represents the color class of `j`; only earlier vertices may represent
/// later ones.
pub fn build_as(graph: &CircleGraph) -> LpModel {
    let n = graph.n();
    let order = degree_order(graph);
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut model = LpModel::new("as", Formulation::As, Sense::Minimize);
    // Variables in degree order, x[a][b] for positions a, b.
    let mut x = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (i, j) = (order[a], order[b]);
            x[a][b] = model
                .add_variable(
                    format!("x_{}_{}", i + 1, j + 1),
                    VarKind::Binary,
                    0.0,
                    1.0,
                    VarRole::Represents {
                        representative: i,
                        vertex: j,
                    },
                )
                .expect("unique");
        }
    }
    model.set_objective((0..n).map(|a| (x[a][a], 1.0)).collect());
    let name = |a: usize, b: usize| format!("{}_{}", order[a] + 1, order[b] + 1);
    for a in 0..n {
        for b in 0..n {
            if a != b && (b < a || graph.adjacent(order[a], order[b])) {
                model.add_constraint(format!("zero_{}", name(a, b)), vec![(x[a][b], 1.0)], Relation::Eq, 0.0);
            }
        }
    }
    for a in 0..n {
        for (j, k) in graph.edges() {
            let (b, c) = (pos[j], pos[k]);
            if b == a || c == a {
                continue;
            }
            model.add_constraint(
                format!("pair_{}_{}_{}", order[a] + 1, j + 1, k + 1),
                vec![(x[a][b], 1.0), (x[a][c], 1.0), (x[a][a], -1.0)],
                Relation::Le,
                0.0,
            );
        }
    }
    for b in 0..n {
        model.add_constraint(
            format!("rep_{}", order[b] + 1),
            (0..n).map(|a| (x[a][b], 1.0)).collect(),
            Relation::Eq,
            1.0,
        );
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                model.add_constraint(
                    format!("link_{}", name(a, b)),
                    vec![(x[a][b], 1.0), (x[a][a], -1.0)],
                    Relation::Le,
                    0.0,
                );
            }
        }
    }
    model
}

/// AS values for a coloring: each class is represented by its first
/// vertex in the degree order.
pub fn as_solution(model: &LpModel, graph: &CircleGraph, coloring: &Coloring) -> Vec<f64> {
    let order = degree_order(graph);
    let mut x = vec![0.0; model.num_variables()];
    let mut leader: Vec<Option<usize>> = vec![None; coloring.num_colors() + 1];
    for &v in &order {
        let c = coloring.color(v);
        let r = *leader[c].get_or_insert(v);
        if let Some(idx) = model.var_by_role(&VarRole::Represents {
            representative: r,
            vertex: v,
        }) {
            x[idx] = 1.0;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::solve_lp;

    fn rep(raw: &[(i64, i64)]) -> IntervalRepresentation {
        IntervalRepresentation::normalize(raw).unwrap()
    }

    fn pentagon() -> IntervalRepresentation {
        rep(&[(1, 4), (3, 6), (5, 8), (7, 10), (2, 9)])
    }

    fn lp_value(model: &LpModel) -> f64 {
        let s = solve_lp(&model.relaxed()).unwrap();
        assert!(s.is_optimal());
        s.objective
    }

    #[test]
    fn cg_single_vertex() {
        let r = rep(&[(10, 20)]);
        let m = build_cg(&r, &ContainmentDag::new(&r), false);
        let names: Vec<&str> = m.variables.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["x_0_1", "c"]);
        assert_eq!(m.num_constraints(), 2);
        assert_eq!(m.constraints[1].relation, Relation::Eq);
        assert!((lp_value(&m) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cg_pentagon_relaxation() {
        let r = pentagon();
        let dag = ContainmentDag::new(&r);
        let m = build_cg(&r, &dag, true);
        assert_eq!(m.num_variables(), 8);
        assert!(m.validate().is_ok());
        assert!((lp_value(&m) - 2.5).abs() < 1e-6);
    }

    #[test]
    fn fcp_matches_cg_relaxation() {
        let r = pentagon();
        let dag = ContainmentDag::new(&r);
        assert!((lp_value(&build_fcp(&r, &dag)) - 2.5).abs() < 1e-6);
        let single = rep(&[(1, 2)]);
        assert!((lp_value(&build_fcp(&single, &ContainmentDag::new(&single))) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn isd_examples() {
        let single = rep(&[(1, 2)]);
        let m = build_isd(&single, &ContainmentDag::new(&single), &[5.0]).unwrap();
        assert!((lp_value(&m) - 5.0).abs() < 1e-9);
        let nested = rep(&[(1, 4), (2, 3)]);
        let m = build_isd(&nested, &ContainmentDag::new(&nested), &[1.0, 1.0]).unwrap();
        assert!((lp_value(&m) - 2.0).abs() < 1e-9);
        let c5 = pentagon();
        let m = build_isd(&c5, &ContainmentDag::new(&c5), &[1.0; 5]).unwrap();
        assert!((lp_value(&m) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lc_and_dlc() {
        let p3 = rep(&[(3, 5), (1, 4), (2, 6)]);
        let dag = ContainmentDag::new(&p3);
        let lc = build_lc(&p3, &dag, Node::Root, &[1.0; 3]).unwrap();
        let dlc = build_dlc(&p3, &dag, Node::Root, &[1.0; 3]).unwrap();
        // All three intervals share a point, so the best chain is a singleton.
        assert!((lp_value(&lc) - 1.0).abs() < 1e-9);
        assert!((lp_value(&dlc) - 1.0).abs() < 1e-9);
        let zero = build_lc(&p3, &dag, Node::Root, &[0.0; 3]).unwrap();
        assert!(lp_value(&zero).abs() < 1e-9);
        assert_eq!(
            build_lc(&p3, &dag, Node::Vertex(0), &[1.0; 3]).unwrap_err(),
            FormulationError::VertexNotBranching(0)
        );
        assert!(build_dlc(&p3, &dag, Node::Vertex(2), &[1.0; 3]).is_ok());
    }

    #[test]
    fn baseline_models_accept_colorings() {
        let r = pentagon();
        let g = CircleGraph::from_intervals(&r);
        let coloring = Coloring::new(vec![1, 2, 1, 2, 3]);
        let cl = build_cl(&g, 3);
        let x = cl_solution(&cl, &coloring);
        assert_eq!(cl.max_violation(&x), 0.0);
        assert_eq!(cl.objective_value(&x), 3.0);
        let model = build_as(&g);
        let x = as_solution(&model, &g, &coloring);
        assert_eq!(model.max_violation(&x), 0.0);
        assert_eq!(model.objective_value(&x), 3.0);
    }

    #[test]
    fn cg_accepts_tree_of_coloring() {
        let r = pentagon();
        let dag = ContainmentDag::new(&r);
        let m = build_cg(&r, &dag, false);
        let tree = Arborescence::from_coloring(&r, &[1, 2, 1, 2, 3]);
        let x = cg_solution(&m, &tree, 3);
        assert_eq!(m.max_violation(&x), 0.0);
    }
}
