//! Stack planning with bounded height: the layered containment DAG, its
//! arborescence program and the decoder from layered arcs to stacks.
//!
//! Copy `(i . h)` of vertex `i` sits at layer `h`; an arc
//! `((i . h), (j . h + 1))` exists whenever `I(i)` strictly contains `I(j)`
//! and `h < H`. The root `(0 . 0)` feeds every layer-1 copy.

use std::fmt;

use thiserror::Error;

use crate::clique::{max_antichain, CliqueMatrix};
use crate::coloring::{Arborescence, Coloring, DecodeError};
use crate::dag::{ContainmentDag, Node};
use crate::formulations::node_rows;
use crate::graph::CircleGraph;
use crate::interval::IntervalRepresentation;
use crate::model::{Formulation, LpModel, Relation, Sense, VarKind, VarRole};
use crate::mwis::decode_arborescence;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StowageError {
    #[error("stack height must be at least 1, got {0}")]
    InvalidHeight(usize),
}

/// Arc of the layered DAG; `layer` is the layer of the tail (0 for the
/// root), so the head sits at `layer + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayeredArc {
    pub from: Node,
    pub layer: usize,
    pub to: usize,
}

impl LayeredArc {
    pub fn role(self) -> VarRole {
        VarRole::LayeredArc {
            from: self.from,
            layer: self.layer,
            to: self.to,
        }
    }

    pub fn name(self) -> String {
        format!("x_{}_{}_{}", self.from.id(), self.layer, self.to + 1)
    }
}

impl fmt::Display for LayeredArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}.{})->({}.{})", self.from.id(), self.layer, self.to + 1, self.layer + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredDag {
    height: usize,
    dag: ContainmentDag,
    arcs: Vec<LayeredArc>,
}

impl LayeredDag {
    pub fn new(rep: &IntervalRepresentation, height: usize) -> Result<Self, StowageError> {
        if height == 0 {
            return Err(StowageError::InvalidHeight(height));
        }
        let dag = ContainmentDag::new(rep);
        let mut arcs: Vec<LayeredArc> = dag
            .topological_order()
            .iter()
            .map(|&j| LayeredArc {
                from: Node::Root,
                layer: 0,
                to: j,
            })
            .collect();
        for h in 1..height {
            for &i in dag.branching() {
                arcs.extend(dag.children(Node::Vertex(i)).iter().map(|&j| LayeredArc {
                    from: Node::Vertex(i),
                    layer: h,
                    to: j,
                }));
            }
        }
        Ok(LayeredDag { height, dag, arcs })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dag(&self) -> &ContainmentDag {
        &self.dag
    }

    /// `n * H + 1` copies including the root.
    pub fn node_count(&self) -> usize {
        self.dag.n() * self.height + 1
    }

    pub fn arcs(&self) -> &[LayeredArc] {
        &self.arcs
    }

    pub fn contains_arc(&self, arc: &LayeredArc) -> bool {
        match arc.from {
            Node::Root => arc.layer == 0 && arc.to < self.dag.n(),
            Node::Vertex(_) => {
                arc.layer >= 1 && arc.layer < self.height && self.dag.has_arc(arc.from, arc.to)
            }
        }
    }

    /// Arcs entering copy `(j . h)`.
    pub fn in_arcs(&self, j: usize, h: usize) -> Vec<LayeredArc> {
        match h {
            0 => vec![],
            1 => vec![LayeredArc {
                from: Node::Root,
                layer: 0,
                to: j,
            }],
            _ if h <= self.height => self
                .dag
                .containers(j)
                .iter()
                .map(|&i| LayeredArc {
                    from: Node::Vertex(i),
                    layer: h - 1,
                    to: j,
                })
                .collect(),
            _ => vec![],
        }
    }

    /// Arcs leaving copy `(i . h)`.
    pub fn out_arcs(&self, i: usize, h: usize) -> Vec<LayeredArc> {
        if h == 0 || h >= self.height {
            return vec![];
        }
        self.dag
            .children(Node::Vertex(i))
            .iter()
            .map(|&j| LayeredArc {
                from: Node::Vertex(i),
                layer: h,
                to: j,
            })
            .collect()
    }
}

/// Layered arborescence program: `min c` with `M x^(0.0) <= c`,
/// `M_i x^(i.h) <= inflow(i.h)` for branching `i` and `h < H`, and one
/// entering arc per vertex over all of its copies.
pub fn build_cgh(rep: &IntervalRepresentation, layered: &LayeredDag, relax: bool) -> LpModel {
    let name = if relax { "cgh_relaxed" } else { "cgh" };
    let mut model = LpModel::new(name, Formulation::Cgh, Sense::Minimize);
    let (xkind, ckind) = if relax {
        (VarKind::Continuous, VarKind::Continuous)
    } else {
        (VarKind::Binary, VarKind::Integer)
    };
    for arc in layered.arcs() {
        model
            .add_variable(arc.name(), xkind, 0.0, 1.0, arc.role())
            .expect("arc names are unique");
    }
    let c = model
        .add_variable("c", ckind, 0.0, f64::INFINITY, VarRole::ColorCount)
        .expect("unique");
    model.set_objective(vec![(c, 1.0)]);
    let var = |arc: LayeredArc| model.var_by_role(&arc.role()).expect("arc is declared");

    let mut rows = Vec::new();
    for row in CliqueMatrix::new(rep).rows() {
        let mut terms: Vec<(usize, f64)> = row
            .members
            .iter()
            .map(|&j| {
                let arc = LayeredArc {
                    from: Node::Root,
                    layer: 0,
                    to: j,
                };
                (var(arc), 1.0)
            })
            .collect();
        terms.push((c, -1.0));
        rows.push((format!("root_p{}", row.point), terms, Relation::Le, 0.0));
    }
    let dag = layered.dag();
    for &i in dag.branching() {
        let matrix = node_rows(rep, dag, Node::Vertex(i));
        for h in 1..layered.height() {
            let inflow: Vec<(usize, f64)> = layered.in_arcs(i, h).into_iter().map(|a| (var(a), -1.0)).collect();
            for row in matrix.rows() {
                let mut terms: Vec<(usize, f64)> = row
                    .members
                    .iter()
                    .map(|&j| {
                        let arc = LayeredArc {
                            from: Node::Vertex(i),
                            layer: h,
                            to: j,
                        };
                        (var(arc), 1.0)
                    })
                    .collect();
                terms.extend_from_slice(&inflow);
                rows.push((format!("chain_{}_{}_p{}", i + 1, h, row.point), terms, Relation::Le, 0.0));
            }
        }
    }
    for j in 0..rep.len() {
        let terms = (1..=layered.height())
            .flat_map(|h| layered.in_arcs(j, h))
            .map(|a| (var(a), 1.0))
            .collect();
        rows.push((format!("assign_{}", j + 1), terms, Relation::Eq, 1.0));
    }
    for (name, terms, rel, rhs) in rows {
        model.add_constraint(name, terms, rel, rhs);
    }
    model
}

/// CG_H values for an arborescence of the plain DAG whose depth is at most
/// the height: vertex `j` at depth `h` enters copy `(j . h)`.
pub fn cgh_solution(model: &LpModel, tree: &Arborescence, c: usize) -> Vec<f64> {
    let mut x = vec![0.0; model.num_variables()];
    for (from, to) in tree.arcs() {
        let layer = match from {
            Node::Root => 0,
            Node::Vertex(p) => tree.depth(p),
        };
        let arc = LayeredArc { from, layer, to };
        if let Some(idx) = model.var_by_role(&arc.role()) {
            x[idx] = 1.0;
        }
    }
    if let Some(idx) = model.var_by_role(&VarRole::ColorCount) {
        x[idx] = c as f64;
    }
    x
}

/// Stacks listed bottom to top (outermost interval first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackPlan {
    stacks: Vec<Vec<usize>>,
    heights: Vec<usize>,
    stack_of: Vec<usize>,
}

impl StackPlan {
    /// Group vertices by color; color `k` becomes stack `k - 1`.
    pub fn from_coloring(rep: &IntervalRepresentation, coloring: &Coloring) -> Self {
        let mut stacks = coloring.classes();
        for s in &mut stacks {
            s.sort_by_key(|&v| rep.interval(v).left);
        }
        let heights = stacks.iter().map(|s| max_antichain(rep, s)).collect();
        let stack_of = coloring.colors().iter().map(|&c| c - 1).collect();
        StackPlan {
            stacks,
            heights,
            stack_of,
        }
    }

    pub fn stacks(&self) -> &[Vec<usize>] {
        &self.stacks
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.stacks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stacks.is_empty()
    }

    pub fn stack_of(&self, v: usize) -> usize {
        self.stack_of[v]
    }

    pub fn max_height(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    /// Stacks partition the vertices, are independent and respect `height`.
    pub fn is_valid(&self, rep: &IntervalRepresentation, graph: &CircleGraph, height: usize) -> bool {
        let mut seen = vec![false; rep.len()];
        for s in &self.stacks {
            for &v in s {
                if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        seen.iter().all(|&b| b)
            && self.stacks.iter().all(|s| {
                graph.is_independent(s) && max_antichain(rep, s) <= height
            })
    }

    /// One line per stack, 1-based vertex ids bottom to top.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stacks {
            let line: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Collapse a layered arc set to an arborescence of the plain DAG, check
/// the layer conditions and decode it into at most `c` stacks.
pub fn decode_plan(
    rep: &IntervalRepresentation,
    layered: &LayeredDag,
    arcs: &[LayeredArc],
    c: usize,
) -> Result<StackPlan, DecodeError> {
    let n = rep.len();
    let mut entering: Vec<Option<LayeredArc>> = vec![None; n];
    for arc in arcs {
        if arc.to >= n || entering[arc.to].is_some() {
            return Err(DecodeError::D0Violated { vertex: arc.to });
        }
        if !layered.contains_arc(arc) {
            return Err(DecodeError::NotArborescence { vertex: arc.to });
        }
        entering[arc.to] = Some(*arc);
    }
    let entering: Vec<LayeredArc> = entering
        .into_iter()
        .enumerate()
        .map(|(v, a)| a.ok_or(DecodeError::D0Violated { vertex: v }))
        .collect::<Result<_, _>>()?;

    // Layer of each vertex's copy in use.
    let layer: Vec<usize> = entering.iter().map(|a| a.layer + 1).collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in &entering {
        if let Node::Vertex(i) = a.from {
            if layer[i] != a.layer {
                return Err(DecodeError::D1Violated { vertex: i, layer: a.layer });
            }
            children[i].push(a.to);
        }
    }
    for (i, ch) in children.iter().enumerate() {
        if !rep.is_chain(ch) {
            return Err(DecodeError::D1Violated { vertex: i, layer: layer[i] });
        }
    }
    let top: Vec<usize> = (0..n).filter(|&v| entering[v].from == Node::Root).collect();
    let antichain = max_antichain(rep, &top);
    if antichain > c {
        return Err(DecodeError::D2Violated { antichain, limit: c });
    }
    let tree = Arborescence::from_parents(entering.iter().map(|a| a.from).collect());
    let coloring = decode_arborescence(rep, layered.dag(), &tree, c)?;
    Ok(StackPlan::from_coloring(rep, &coloring))
}
