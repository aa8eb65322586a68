//! Brute-force reference answers for small graphs. Every routine refuses
//! inputs above its budget instead of running unbounded.

use thiserror::Error;

use crate::clique::max_antichain;
use crate::graph::CircleGraph;
use crate::interval::IntervalRepresentation;
use crate::model::{Formulation, LpModel, Relation, Sense, VarKind, VarRole};
use crate::simplex::{solve_lp, SimplexError};

/// Largest instance the stack oracle accepts.
pub const STACKS_MAX_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_independent_sets: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 12,
            max_independent_sets: 100_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{what} is {size}, above the oracle budget of {limit}")]
    OverBudget {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("covering LP did not reach an optimum")]
    LpFailed,
}

impl OracleBudget {
    pub fn check_vertices(&self, n: usize) -> Result<(), OracleError> {
        if n > self.max_vertices || n > 63 {
            return Err(OracleError::OverBudget {
                what: "vertex count",
                size: n,
                limit: self.max_vertices.min(63),
            });
        }
        Ok(())
    }

    fn check_sets(&self, count: usize) -> Result<(), OracleError> {
        if count > self.max_independent_sets {
            return Err(OracleError::OverBudget {
                what: "independent set count",
                size: count,
                limit: self.max_independent_sets,
            });
        }
        Ok(())
    }
}

fn neighbor_masks(graph: &CircleGraph) -> Vec<u64> {
    (0..graph.n())
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

fn is_independent(nbrs: &[u64], mask: u64) -> bool {
    members(mask).iter().all(|&v| nbrs[v] & mask == 0)
}

/// Every nonempty independent set as a bit mask.
pub fn independent_sets(graph: &CircleGraph, budget: &OracleBudget) -> Result<Vec<u64>, OracleError> {
    let n = graph.n();
    budget.check_vertices(n)?;
    let nbrs = neighbor_masks(graph);
    let mut out = Vec::new();
    // Extend sets one vertex at a time, in increasing vertex order.
    let mut stack: Vec<(u64, usize)> = vec![(0, 0)];
    while let Some((mask, next)) = stack.pop() {
        for v in next..n {
            if nbrs[v] & mask == 0 {
                let grown = mask | 1 << v;
                out.push(grown);
                budget.check_sets(out.len())?;
                stack.push((grown, v + 1));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Maximal independent sets by Bron-Kerbosch with pivoting on the
/// complement graph.
pub fn maximal_independent_sets(
    graph: &CircleGraph,
    budget: &OracleBudget,
) -> Result<Vec<u64>, OracleError> {
    let n = graph.n();
    budget.check_vertices(n)?;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // Non-neighbors in the complement sense: compatible vertices.
    let compat: Vec<u64> = neighbor_masks(graph)
        .iter()
        .enumerate()
        .map(|(v, &m)| full & !m & !(1 << v))
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(0u64, full, 0u64)];
    while let Some((r, p, x)) = stack.pop() {
        if p == 0 {
            if x == 0 {
                out.push(r);
                budget.check_sets(out.len())?;
            }
            continue;
        }
        let pivot = members(p | x)
            .into_iter()
            .max_by_key(|&u| (p & compat[u]).count_ones())
            .expect("p is nonempty");
        let (mut p, mut x) = (p, x);
        for v in members(p & !compat[pivot]) {
            stack.push((r | 1 << v, p & compat[v], x & compat[v]));
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn covering_lp(n: usize, sets: &[u64], relation: Relation) -> Result<f64, OracleError> {
    let mut model = LpModel::new("cover", Formulation::Custom, Sense::Minimize);
    let q: Vec<usize> = sets
        .iter()
        .map(|s| {
            model
                .add_variable(format!("q_{s:x}"), VarKind::Continuous, 0.0, f64::INFINITY, VarRole::Other)
                .expect("distinct sets")
        })
        .collect();
    model.set_objective(q.iter().map(|&j| (j, 1.0)).collect());
    for v in 0..n {
        let terms = sets
            .iter()
            .zip(&q)
            .filter(|(s, _)| *s >> v & 1 == 1)
            .map(|(_, &j)| (j, 1.0))
            .collect();
        model.add_constraint(format!("v{v}"), terms, relation, 1.0);
    }
    let sol = solve_lp(&model)?;
    if !sol.is_optimal() {
        return Err(OracleError::LpFailed);
    }
    Ok(sol.objective)
}

/// Fractional chromatic number: `min 1'q` with `F q >= 1` over the maximal
/// independent sets.
pub fn fractional_chromatic_exact(graph: &CircleGraph, budget: &OracleBudget) -> Result<f64, OracleError> {
    let sets = maximal_independent_sets(graph, budget)?;
    covering_lp(graph.n(), &sets, Relation::Ge)
}

/// Same value through `F q = 1` over all nonempty independent sets.
pub fn fractional_chromatic_all_sets(
    graph: &CircleGraph,
    budget: &OracleBudget,
) -> Result<f64, OracleError> {
    let sets = independent_sets(graph, budget)?;
    covering_lp(graph.n(), &sets, Relation::Eq)
}

/// Largest clique by exhaustive search (small graphs only).
pub fn clique_number_exact(graph: &CircleGraph, budget: &OracleBudget) -> Result<usize, OracleError> {
    budget.check_vertices(graph.n())?;
    let nbrs = neighbor_masks(graph);
    fn grow(nbrs: &[u64], cand: u64, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let mut cand = cand;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            grow(nbrs, cand & nbrs[v], size + 1, best);
        }
    }
    let full = (1u64 << graph.n()) - 1;
    let mut best = 0;
    grow(&nbrs, full, 0, &mut best);
    Ok(best)
}

/// Chromatic number by backtracking: try `k = omega, omega + 1, ...`,
/// opening a new color only as the next unused one.
pub fn chromatic_exact(graph: &CircleGraph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let n = graph.n();
    let lower = clique_number_exact(graph, budget)?;
    if n == 0 {
        return Ok(0);
    }
    // Color high-degree vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
    fn extend(graph: &CircleGraph, order: &[usize], colors: &mut [usize], at: usize, used: usize, k: usize) -> bool {
        if at == order.len() {
            return true;
        }
        let v = order[at];
        for c in 1..=(used + 1).min(k) {
            if graph.neighbors(v).iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if extend(graph, order, colors, at + 1, used.max(c), k) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    let mut k = lower.max(1);
    loop {
        let mut colors = vec![0; n];
        if extend(graph, &order, &mut colors, 0, 0, k) {
            return Ok(k);
        }
        k += 1;
    }
}

/// Maximum weight of an independent set (the empty set counts).
pub fn mwis_exact(graph: &CircleGraph, weights: &[f64], budget: &OracleBudget) -> Result<f64, OracleError> {
    let sets = independent_sets(graph, budget)?;
    Ok(sets
        .iter()
        .map(|&s| members(s).iter().map(|&v| weights[v]).sum::<f64>())
        .fold(0.0, f64::max))
}

/// Nonempty independent sets whose largest nested family has at most
/// `height` intervals (the admissible stacks).
pub fn admissible_stacks(rep: &IntervalRepresentation, height: usize) -> Result<Vec<u64>, OracleError> {
    let n = rep.len();
    if n > STACKS_MAX_VERTICES {
        return Err(OracleError::OverBudget {
            what: "vertex count",
            size: n,
            limit: STACKS_MAX_VERTICES,
        });
    }
    let graph = CircleGraph::from_intervals(rep);
    let nbrs = neighbor_masks(&graph);
    Ok((1u64..1 << n)
        .filter(|&s| is_independent(&nbrs, s) && max_antichain(rep, &members(s)) <= height)
        .collect())
}

/// Fewest admissible stacks covering every vertex, by subset dynamic
/// programming.
pub fn stacks_exact(rep: &IntervalRepresentation, height: usize) -> Result<usize, OracleError> {
    let n = rep.len();
    let valid_list = admissible_stacks(rep, height)?;
    let full = (1usize << n) - 1;
    let mut valid = vec![false; full + 1];
    for s in valid_list {
        valid[s as usize] = true;
    }
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        // The stack holding the lowest remaining vertex.
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        let mut sub = rest;
        loop {
            let s = sub | low;
            if valid[s] && best[mask & !s] != usize::MAX {
                best[mask] = best[mask].min(best[mask & !s] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(best[full])
}

/// Linear relaxation of the stack covering problem: `min 1'q` with
/// `F_H q = 1` over all admissible stacks.
pub fn stacks_lp_exact(rep: &IntervalRepresentation, height: usize) -> Result<f64, OracleError> {
    let sets = admissible_stacks(rep, height)?;
    covering_lp(rep.len(), &sets, Relation::Eq)
}
