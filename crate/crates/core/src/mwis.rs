//! Maximum weight independent sets, chains, chain partitions and the
//! arborescence-to-coloring decoder.
//!
//! The independent-set recursion labels every vertex `i` with
//! `ell[i] = w(i) + (best chain inside I(i) under ell)` for branching
//! vertices and `ell[i] = w(i)` for the rest; the root label is the optimum.
//! Labels are computed children first, i.e. by descending left endpoint.

use crate::clique::max_antichain;
use crate::coloring::{Arborescence, Coloring, DecodeError};
use crate::dag::{ContainmentDag, Node};
use crate::interval::IntervalRepresentation;

/// Labels of the independent-set recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct DpLabels {
    pub root: f64,
    pub vertex: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MwisSolution {
    pub value: f64,
    pub labels: DpLabels,
    /// An optimal independent set, ascending vertex id.
    pub set: Vec<usize>,
}

/// Maximum-value chain among `candidates` (weighted interval scheduling).
/// The empty chain is allowed, so the value is never negative.
pub fn max_weight_chain(
    rep: &IntervalRepresentation,
    candidates: &[usize],
    values: &[f64],
) -> (f64, Vec<usize>) {
    let mut order = candidates.to_vec();
    order.sort_unstable_by_key(|&v| rep.interval(v).right);
    let k = order.len();
    // best[t]: optimum over the first t intervals by right endpoint.
    let mut best = vec![0.0f64; k + 1];
    let mut take = vec![false; k];
    let mut pred = vec![0usize; k];
    for t in 0..k {
        let v = order[t];
        let left = rep.interval(v).left;
        // Number of earlier intervals ending before v starts.
        pred[t] = order[..t].partition_point(|&u| rep.interval(u).right < left);
        let with = values[v] + best[pred[t]];
        if with > best[t] {
            best[t + 1] = with;
            take[t] = true;
        } else {
            best[t + 1] = best[t];
        }
    }
    let mut chain = Vec::new();
    let mut t = k;
    while t > 0 {
        if take[t - 1] {
            chain.push(order[t - 1]);
            t = pred[t - 1];
        } else {
            t -= 1;
        }
    }
    chain.reverse();
    (best[k], chain)
}

/// Maximum weight independent set by the chain recursion over the
/// containment DAG. Weights may be negative.
pub fn solve_mwis(rep: &IntervalRepresentation, dag: &ContainmentDag, weights: &[f64]) -> MwisSolution {
    let n = rep.len();
    assert_eq!(weights.len(), n, "one weight per vertex");
    let mut ell = weights.to_vec();
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &i in dag.topological_order().iter().rev() {
        if dag.is_branching(i) {
            let (value, chain) = max_weight_chain(rep, dag.children(Node::Vertex(i)), &ell);
            ell[i] = weights[i] + value;
            chosen[i] = chain;
        }
    }
    let (root, top) = max_weight_chain(rep, dag.children(Node::Root), &ell);

    let mut set = Vec::new();
    let mut stack = top;
    while let Some(v) = stack.pop() {
        set.push(v);
        stack.extend_from_slice(&chosen[v]);
    }
    set.sort_unstable();
    MwisSolution {
        value: root,
        labels: DpLabels { root, vertex: ell },
        set,
    }
}

/// Partition `subset` into the minimum number of chains: sweep by left
/// endpoint and append each interval to the lowest-index chain whose last
/// interval already ended.
pub fn chain_partition(rep: &IntervalRepresentation, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut order = subset.to_vec();
    order.sort_unstable_by_key(|&v| rep.interval(v).left);
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for v in order {
        let left = rep.interval(v).left;
        match chains
            .iter_mut()
            .find(|c| rep.interval(*c.last().unwrap()).right < left)
        {
            Some(chain) => chain.push(v),
            None => chains.push(vec![v]),
        }
    }
    chains
}

/// Turn an arborescence satisfying the chain conditions into a proper
/// coloring with at most `c` colors: chain-partition the root's children,
/// give each chain a color and let descendants inherit it.
pub fn decode_arborescence(
    rep: &IntervalRepresentation,
    dag: &ContainmentDag,
    tree: &Arborescence,
    c: usize,
) -> Result<Coloring, DecodeError> {
    if tree.len() != rep.len() {
        return Err(DecodeError::NotArborescence {
            vertex: tree.len().min(rep.len()),
        });
    }
    tree.check_arcs(dag)?;
    let lists = tree.child_lists();
    for (id, children) in lists.iter().enumerate().skip(1) {
        if !rep.is_chain(children) {
            return Err(DecodeError::C1Violated {
                node: Node::from_id(id),
            });
        }
    }
    let top = &lists[0];
    let antichain = max_antichain(rep, top);
    if antichain > c {
        return Err(DecodeError::C2Violated { antichain, limit: c });
    }

    let mut colors = vec![0usize; rep.len()];
    for (k, chain) in chain_partition(rep, top).iter().enumerate() {
        for &v in chain {
            colors[v] = k + 1;
        }
    }
    // Parents precede children in left-endpoint order.
    for &v in dag.topological_order() {
        if let Node::Vertex(p) = tree.parent(v) {
            colors[v] = colors[p];
        }
    }
    Ok(Coloring::new(colors).with_certificate(tree.clone()))
}
