//! LP-based branch and bound, first fit, and the exact drivers for the
//! chromatic number, the stack planning problem and the baseline models.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use log::debug;
use thiserror::Error;

use crate::clique::max_antichain;
use crate::coloring::{Arborescence, Coloring, DecodeError};
use crate::dag::{ContainmentDag, Node};
use crate::formulations::{as_solution, build_as, build_cg, build_cl, cg_solution, cl_solution};
use crate::graph::CircleGraph;
use crate::interval::IntervalRepresentation;
use crate::model::{LpModel, VarKind, VarRole};
use crate::mwis::decode_arborescence;
use crate::simplex::{solve_lp_bounded, LpStatus, SimplexError, SimplexOptions};
use crate::stowage::{build_cgh, cgh_solution, decode_plan, LayeredArc, LayeredDag, StackPlan, StowageError};

#[derive(Clone, Debug, PartialEq)]
pub struct BnbOptions {
    pub simplex: SimplexOptions,
    pub integrality_tol: f64,
    /// LP solves allowed; 0 means unlimited.
    pub node_limit: usize,
}

impl Default for BnbOptions {
    fn default() -> Self {
        BnbOptions {
            simplex: SimplexOptions::default(),
            integrality_tol: 1e-6,
            node_limit: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BnbStatus {
    Optimal,
    Infeasible,
    NodeLimit,
}

#[derive(Clone, Debug)]
pub struct BnbResult {
    pub status: BnbStatus,
    /// Best objective found (infinite when none).
    pub objective: f64,
    pub solution: Option<Vec<f64>>,
    pub root_bound: f64,
    pub root_solution: Vec<f64>,
    pub root_integral: bool,
    /// Number of LP relaxations solved, the root included.
    pub nodes: usize,
    pub lp_iterations: usize,
    pub root_time: Duration,
}

type Heuristic<'a> = Box<dyn FnMut(&[f64]) -> Option<Vec<f64>> + 'a>;

/// Problem-specific knobs for [`branch_and_bound`].
#[derive(Default)]
pub struct Search<'a> {
    /// Starting incumbent; ignored unless feasible and integral.
    pub incumbent: Option<Vec<f64>>,
    /// Turns a fractional LP point into a candidate solution.
    pub heuristic: Option<Heuristic<'a>>,
    /// Tie-break among equally fractional variables; larger goes first.
    pub priority: Option<Box<dyn Fn(usize) -> usize + 'a>>,
}

struct Open {
    bound: f64,
    depth: usize,
    seq: usize,
    fixes: Vec<(usize, f64, f64)>,
    x: Vec<f64>,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Open {
    // Max-heap order: smallest bound, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Objective takes integer values on every integer point.
fn objective_is_integral(model: &LpModel) -> bool {
    model
        .objective
        .iter()
        .all(|&(j, c)| model.variables[j].kind != VarKind::Continuous && c.fract() == 0.0)
}

/// Minimize `model` (a minimization with integer/binary variables) by best
/// bound search. The bound of a node is `ceil(lp - tol)` when the objective
/// is integral on integer points.
pub fn branch_and_bound(
    model: &LpModel,
    opts: &BnbOptions,
    mut search: Search<'_>,
) -> Result<BnbResult, SimplexError> {
    assert_eq!(model.sense, crate::model::Sense::Minimize, "branch and bound minimizes");
    let tol = opts.integrality_tol;
    let integral_obj = objective_is_integral(model);
    let key = |lp: f64| if integral_obj { (lp - tol).ceil() } else { lp };
    let margin = if integral_obj { 0.5 } else { 1e-9 };
    let base: Vec<(f64, f64)> = model.variables.iter().map(|v| (v.lower, v.upper)).collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |x: Vec<f64>, best: &mut Option<(f64, Vec<f64>)>| {
        if model.max_violation(&x) > 1e-6 || !model.is_integral(&x, tol) {
            return;
        }
        let obj = model.objective_value(&x);
        if best.as_ref().is_none_or(|(b, _)| obj < b - 1e-9) {
            *best = Some((obj, x));
        }
    };
    if let Some(x) = search.incumbent.take() {
        consider(x, &mut best);
    }

    let started = Instant::now();
    let root = solve_lp_bounded(model, &base, &opts.simplex)?;
    let root_time = started.elapsed();
    let mut nodes = 1;
    let mut lp_iterations = root.iterations;
    match root.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Ok(BnbResult {
                status: BnbStatus::Infeasible,
                objective: f64::INFINITY,
                solution: None,
                root_bound: f64::INFINITY,
                root_solution: vec![],
                root_integral: false,
                nodes,
                lp_iterations,
                root_time,
            });
        }
        LpStatus::Unbounded => {
            return Err(SimplexError::NumericalFailure {
                iterations: root.iterations,
                reason: "relaxation is unbounded".into(),
            })
        }
    }
    let root_integral = model.is_integral(&root.primal, tol);
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    if root_integral {
        consider(root.primal.clone(), &mut best);
    } else {
        if let Some(h) = search.heuristic.as_mut() {
            if let Some(x) = h(&root.primal) {
                consider(x, &mut best);
            }
        }
        heap.push(Open {
            bound: key(root.objective),
            depth: 0,
            seq,
            fixes: vec![],
            x: root.primal.clone(),
        });
    }
    debug!(
        "root: bound {:.6} incumbent {:?} integral {}",
        root.objective,
        best.as_ref().map(|b| b.0),
        root_integral
    );

    let mut status = BnbStatus::Optimal;
    'search: while let Some(node) = heap.pop() {
        if best.as_ref().is_some_and(|(b, _)| node.bound > b - margin) {
            break;
        }
        let Some((var, down, up)) = pick_branch(model, &node.x, tol, search.priority.as_deref()) else {
            continue;
        };
        for (lo, hi) in [up, down] {
            if opts.node_limit > 0 && nodes >= opts.node_limit {
                status = BnbStatus::NodeLimit;
                break 'search;
            }
            let mut fixes = node.fixes.clone();
            fixes.push((var, lo, hi));
            let mut bounds = base.clone();
            for &(j, l, h) in &fixes {
                bounds[j] = (bounds[j].0.max(l), bounds[j].1.min(h));
            }
            let sol = solve_lp_bounded(model, &bounds, &opts.simplex)?;
            nodes += 1;
            lp_iterations += sol.iterations;
            let incumbent = best.as_ref().map(|b| b.0);
            debug!(
                "node {nodes}: depth {} x{var} in [{lo}, {hi}] status {:?} bound {:.6} incumbent {incumbent:?}",
                node.depth + 1,
                sol.status,
                sol.objective
            );
            if sol.status != LpStatus::Optimal {
                continue;
            }
            let bound = key(sol.objective);
            if incumbent.is_some_and(|b| bound > b - margin) {
                continue;
            }
            if model.is_integral(&sol.primal, tol) {
                consider(sol.primal, &mut best);
                continue;
            }
            if let Some(h) = search.heuristic.as_mut() {
                if let Some(x) = h(&sol.primal) {
                    consider(x, &mut best);
                }
            }
            seq += 1;
            heap.push(Open {
                bound,
                depth: node.depth + 1,
                seq,
                fixes,
                x: sol.primal,
            });
        }
    }

    let (status, objective, solution) = match best {
        Some((obj, x)) => (status, obj, Some(x)),
        None if status == BnbStatus::NodeLimit => (status, f64::INFINITY, None),
        None => (BnbStatus::Infeasible, f64::INFINITY, None),
    };
    Ok(BnbResult {
        status,
        objective,
        solution,
        root_bound: root.objective,
        root_solution: root.primal,
        root_integral,
        nodes,
        lp_iterations,
        root_time,
    })
}

type Branch = (usize, (f64, f64), (f64, f64));

/// Most fractional binary, else most fractional general integer.
fn pick_branch(
    model: &LpModel,
    x: &[f64],
    tol: f64,
    priority: Option<&(dyn Fn(usize) -> usize + '_)>,
) -> Option<Branch> {
    for kind in [VarKind::Binary, VarKind::Integer] {
        let mut best: Option<(usize, f64, usize)> = None;
        for (j, v) in model.variables.iter().enumerate() {
            if v.kind != kind {
                continue;
            }
            let f = x[j] - x[j].floor();
            let frac = f.min(1.0 - f);
            if frac <= tol {
                continue;
            }
            let p = priority.map_or(0, |p| p(j));
            let better = match best {
                None => true,
                Some((_, bf, bp)) => frac > bf + 1e-9 || ((frac - bf).abs() <= 1e-9 && p > bp),
            };
            if better {
                best = Some((j, frac, p));
            }
        }
        if let Some((j, _, _)) = best {
            let v = &model.variables[j];
            return Some((j, (v.lower, x[j].floor()), (x[j].ceil(), v.upper)));
        }
    }
    None
}

/// Convenience wrapper without problem-specific hooks.
pub fn solve_ilp(model: &LpModel, opts: &BnbOptions) -> Result<BnbResult, SimplexError> {
    branch_and_bound(model, opts, Search::default())
}

/// Greedy coloring: each vertex in `order` takes the smallest color not
/// used by an already colored neighbor.
pub fn first_fit(graph: &CircleGraph, order: &[usize]) -> Coloring {
    let n = graph.n();
    let mut colors = vec![0usize; n];
    let mut taken = vec![usize::MAX; n + 2];
    for &v in order {
        for &u in graph.neighbors(v) {
            if colors[u] > 0 {
                taken[colors[u]] = v;
            }
        }
        colors[v] = (1..).find(|&c| taken[c] != v).expect("a free color exists");
    }
    Coloring::new(colors)
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("solution could not be decoded: {0}")]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Stowage(#[from] StowageError),
    #[error("the integer program is infeasible")]
    Infeasible,
    #[error("node limit reached before optimality was proven")]
    NodeLimit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub build: Duration,
    pub root_lp: Duration,
    pub search: Duration,
    pub total: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub chromatic_number: usize,
    /// Optimum of the root relaxation.
    pub fractional_chromatic: f64,
    pub root_gap: f64,
    pub root_integral: bool,
    pub nodes_explored: usize,
    pub lp_iterations: usize,
    pub coloring: Coloring,
    pub timings: Timings,
}

/// Round a fractional arc vector to an arborescence meeting the chain
/// condition (and a depth cap when given): every vertex takes its heaviest
/// entering arc, children that break a chain move to the root, and so do
/// vertices deeper than the cap.
fn round_arborescence(
    rep: &IntervalRepresentation,
    dag: &ContainmentDag,
    weight: impl Fn(Node, usize) -> f64,
    max_depth: Option<usize>,
) -> Arborescence {
    let n = rep.len();
    let mut parent = vec![Node::Root; n];
    for j in 0..n {
        let mut best = (Node::Root, weight(Node::Root, j));
        for from in dag.in_arcs(j).skip(1) {
            let w = weight(from, j);
            if w > best.1 + 1e-9 {
                best = (from, w);
            }
        }
        parent[j] = best.0;
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, p) in parent.iter().enumerate() {
        if let Node::Vertex(i) = *p {
            children[i].push(j);
        }
    }
    for (i, ch) in children.iter_mut().enumerate() {
        ch.sort_by(|&a, &b| {
            weight(Node::Vertex(i), b)
                .total_cmp(&weight(Node::Vertex(i), a))
                .then(rep.interval(a).left.cmp(&rep.interval(b).left))
        });
        let mut kept: Vec<usize> = Vec::new();
        for &j in ch.iter() {
            if kept.iter().all(|&k| rep.comparable(j, k)) {
                kept.push(j);
            } else {
                parent[j] = Node::Root;
            }
        }
    }
    if let Some(h) = max_depth {
        let mut depth = vec![1usize; n];
        for &j in dag.topological_order() {
            if let Node::Vertex(p) = parent[j] {
                if depth[p] + 1 > h {
                    parent[j] = Node::Root;
                } else {
                    depth[j] = depth[p] + 1;
                }
            }
        }
    }
    Arborescence::from_parents(parent)
}

fn root_antichain(rep: &IntervalRepresentation, tree: &Arborescence) -> usize {
    max_antichain(rep, &tree.children(Node::Root))
}

/// Left-endpoint first fit, the starting incumbent for every driver.
pub fn first_fit_by_left(rep: &IntervalRepresentation, graph: &CircleGraph) -> Coloring {
    first_fit(graph, &rep.by_left())
}

pub fn solve_chromatic(rep: &IntervalRepresentation) -> Result<SolveReport, SolveError> {
    solve_chromatic_with(rep, &BnbOptions::default())
}

/// Exact chromatic number through the arborescence program. The returned
/// coloring is decoded from the optimal arborescence.
pub fn solve_chromatic_with(
    rep: &IntervalRepresentation,
    opts: &BnbOptions,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let graph = CircleGraph::from_intervals(rep);
    let dag = ContainmentDag::new(rep);
    let model = build_cg(rep, &dag, false);
    let build = start.elapsed();

    let greedy = first_fit_by_left(rep, &graph);
    let tree = Arborescence::from_coloring(rep, greedy.colors());
    let incumbent = cg_solution(&model, &tree, greedy.num_colors());

    let arc_weight = |x: &[f64], from: Node, to: usize| {
        model
            .var_by_role(&VarRole::Arc { from, to })
            .map_or(0.0, |idx| x[idx])
    };
    let heuristic = |x: &[f64]| {
        let tree = round_arborescence(rep, &dag, |f, t| arc_weight(x, f, t), None);
        Some(cg_solution(&model, &tree, root_antichain(rep, &tree)))
    };
    let priority = |j: usize| match model.role(j) {
        VarRole::Arc { to, .. } => dag.children(Node::Vertex(to)).len(),
        _ => 0,
    };
    let search = Search {
        incumbent: Some(incumbent),
        heuristic: Some(Box::new(heuristic)),
        priority: Some(Box::new(priority)),
    };
    let searched = Instant::now();
    let result = branch_and_bound(&model, opts, search)?;
    let search_time = searched.elapsed();
    let x = match (result.status, result.solution) {
        (BnbStatus::Optimal, Some(x)) => x,
        (BnbStatus::NodeLimit, _) => return Err(SolveError::NodeLimit),
        _ => return Err(SolveError::Infeasible),
    };
    let chi = result.objective.round() as usize;
    let parents = (0..rep.len())
        .map(|j| {
            dag.in_arcs(j)
                .find(|&from| arc_weight(&x, from, j) > 0.5)
                .expect("one entering arc per vertex")
        })
        .collect();
    let coloring = decode_arborescence(rep, &dag, &Arborescence::from_parents(parents), chi)?;
    Ok(SolveReport {
        chromatic_number: chi,
        fractional_chromatic: result.root_bound,
        root_gap: chi as f64 - result.root_bound,
        root_integral: result.root_integral,
        nodes_explored: result.nodes,
        lp_iterations: result.lp_iterations,
        coloring,
        timings: Timings {
            build,
            root_lp: result.root_time,
            search: search_time.saturating_sub(result.root_time),
            total: start.elapsed(),
        },
    })
}

#[derive(Clone, Debug)]
pub struct StacksReport {
    pub stacks: usize,
    pub requested_height: usize,
    /// Height actually modeled: the request capped at the nesting depth.
    pub effective_height: usize,
    pub lp_relaxation: f64,
    pub root_integral: bool,
    pub nodes_explored: usize,
    pub lp_iterations: usize,
    pub plan: StackPlan,
    pub timings: Timings,
}

pub fn solve_stacks(rep: &IntervalRepresentation, height: usize) -> Result<StacksReport, SolveError> {
    solve_stacks_with(rep, height, &BnbOptions::default())
}

/// Minimum number of stacks of height at most `height` via the layered
/// arborescence program.
pub fn solve_stacks_with(
    rep: &IntervalRepresentation,
    height: usize,
    opts: &BnbOptions,
) -> Result<StacksReport, SolveError> {
    let start = Instant::now();
    if height == 0 {
        return Err(StowageError::InvalidHeight(0).into());
    }
    let graph = CircleGraph::from_intervals(rep);
    let dag = ContainmentDag::new(rep);
    let effective = height.min(dag.depth().max(1));
    let layered = LayeredDag::new(rep, effective)?;
    let model = build_cgh(rep, &layered, false);
    let build = start.elapsed();

    let layered_weight = |x: &[f64], from: Node, to: usize| -> f64 {
        (0..effective)
            .filter_map(|layer| model.var_by_role(&LayeredArc { from, layer, to }.role()))
            .map(|idx| x[idx])
            .sum()
    };
    let greedy = first_fit_by_left(rep, &graph);
    let greedy_tree = Arborescence::from_coloring(rep, greedy.colors());
    let capped = round_arborescence(
        rep,
        &dag,
        |from, to| if greedy_tree.parent(to) == from { 1.0 } else { 0.0 },
        Some(effective),
    );
    let incumbent = cgh_solution(&model, &capped, root_antichain(rep, &capped));
    let heuristic = |x: &[f64]| {
        let tree = round_arborescence(rep, &dag, |f, t| layered_weight(x, f, t), Some(effective));
        Some(cgh_solution(&model, &tree, root_antichain(rep, &tree)))
    };
    let priority = |j: usize| match model.role(j) {
        VarRole::LayeredArc { to, .. } => dag.children(Node::Vertex(to)).len(),
        _ => 0,
    };
    let search = Search {
        incumbent: Some(incumbent),
        heuristic: Some(Box::new(heuristic)),
        priority: Some(Box::new(priority)),
    };
    let searched = Instant::now();
    let result = branch_and_bound(&model, opts, search)?;
    let search_time = searched.elapsed();
    let x = match (result.status, result.solution) {
        (BnbStatus::Optimal, Some(x)) => x,
        (BnbStatus::NodeLimit, _) => return Err(SolveError::NodeLimit),
        // Singleton stacks are always feasible.
        _ => unreachable!("the layered program always has a feasible point"),
    };
    let stacks = result.objective.round() as usize;
    let arcs: Vec<LayeredArc> = (0..model.num_variables())
        .filter(|&j| x[j] > 0.5)
        .filter_map(|j| match model.role(j) {
            VarRole::LayeredArc { from, layer, to } => Some(LayeredArc { from, layer, to }),
            _ => None,
        })
        .collect();
    let plan = decode_plan(rep, &layered, &arcs, stacks)?;
    Ok(StacksReport {
        stacks,
        requested_height: height,
        effective_height: effective,
        lp_relaxation: result.root_bound,
        root_integral: result.root_integral,
        nodes_explored: result.nodes,
        lp_iterations: result.lp_iterations,
        plan,
        timings: Timings {
            build,
            root_lp: result.root_time,
            search: search_time.saturating_sub(result.root_time),
            total: start.elapsed(),
        },
    })
}

/// The two textbook formulations used for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Baseline {
    Classical,
    Representatives,
}

#[derive(Clone, Debug)]
pub struct BaselineReport {
    pub optimum: usize,
    pub lp_relaxation: f64,
    pub nodes_explored: usize,
    pub colors_available: usize,
}

/// Solve a baseline model by branch and bound, seeded with first fit.
pub fn solve_baseline(
    rep: &IntervalRepresentation,
    which: Baseline,
    opts: &BnbOptions,
) -> Result<BaselineReport, SolveError> {
    let graph = CircleGraph::from_intervals(rep);
    let greedy = first_fit_by_left(rep, &graph);
    let colors = greedy.num_colors();
    let (model, incumbent) = match which {
        Baseline::Classical => {
            let m = build_cl(&graph, colors);
            let x = cl_solution(&m, &greedy);
            (m, x)
        }
        Baseline::Representatives => {
            let m = build_as(&graph);
            let x = as_solution(&m, &graph, &greedy);
            (m, x)
        }
    };
    let result = branch_and_bound(
        &model,
        opts,
        Search {
            incumbent: Some(incumbent),
            ..Search::default()
        },
    )?;
    match result.status {
        BnbStatus::Optimal => Ok(BaselineReport {
            optimum: result.objective.round() as usize,
            lp_relaxation: result.root_bound,
            nodes_explored: result.nodes,
            colors_available: colors,
        }),
        BnbStatus::NodeLimit => Err(SolveError::NodeLimit),
        BnbStatus::Infeasible => Err(SolveError::Infeasible),
    }
}
