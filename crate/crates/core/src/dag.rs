use std::fmt;

use serde::{Deserialize, Serialize};

use crate::interval::IntervalRepresentation;

/// A vertex of the containment DAG: the artificial root or a graph vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    Root,
    Vertex(usize),
}

impl Node {
    pub fn vertex(self) -> Option<usize> {
        match self {
            Node::Root => None,
            Node::Vertex(v) => Some(v),
        }
    }

    /// External id: 0 for the root, `v + 1` for vertex `v`.
    pub fn id(self) -> usize {
        match self {
            Node::Root => 0,
            Node::Vertex(v) => v + 1,
        }
    }

    pub fn from_id(id: usize) -> Self {
        match id {
            0 => Node::Root,
            k => Node::Vertex(k - 1),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// The DAG on `V ∪ {root}` with an arc from the root to every vertex and an
/// arc `(i, j)` whenever `I(i) ⊋ I(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentDag {
    // R_V(i): vertices strictly inside I(i), ascending left endpoint.
    children: Vec<Vec<usize>>,
    // Vertices strictly containing j, ascending left endpoint.
    containers: Vec<Vec<usize>>,
    topo: Vec<usize>,
    branching: Vec<usize>,
}

impl ContainmentDag {
    pub fn new(rep: &IntervalRepresentation) -> Self {
        let n = rep.len();
        let topo = rep.by_left();
        let mut children = vec![Vec::new(); n];
        let mut containers = vec![Vec::new(); n];
        for (a, &i) in topo.iter().enumerate() {
            for &j in &topo[a + 1..] {
                if rep.interval(j).left > rep.interval(i).right {
                    break;
                }
                if rep.contains(i, j) {
                    children[i].push(j);
                    containers[j].push(i);
                }
            }
        }
        let branching = topo.iter().copied().filter(|&i| !children[i].is_empty()).collect();
        ContainmentDag {
            children,
            containers,
            topo,
            branching,
        }
    }

    pub fn n(&self) -> usize {
        self.topo.len()
    }

    /// `R_V(node)`; for the root this is every vertex.
    pub fn children(&self, node: Node) -> &[usize] {
        match node {
            Node::Root => &self.topo,
            Node::Vertex(v) => &self.children[v],
        }
    }

    /// Tails of the arcs entering `j`: the root first, then the containers
    /// of `j` by ascending left endpoint.
    pub fn in_arcs(&self, j: usize) -> impl Iterator<Item = Node> + '_ {
        std::iter::once(Node::Root).chain(self.containers[j].iter().map(|&i| Node::Vertex(i)))
    }

    pub fn containers(&self, j: usize) -> &[usize] {
        &self.containers[j]
    }

    pub fn has_arc(&self, from: Node, to: usize) -> bool {
        match from {
            Node::Root => to < self.n(),
            Node::Vertex(i) => self.children[i].contains(&to),
        }
    }

    /// `V•`: vertices with at least one child, in topological order.
    pub fn branching(&self) -> &[usize] {
        &self.branching
    }

    pub fn is_branching(&self, v: usize) -> bool {
        !self.children[v].is_empty()
    }

    /// Vertices by ascending left endpoint (parents before children).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Every arc: root arcs in topological order, then containment arcs
    /// grouped by tail.
    pub fn arcs(&self) -> Vec<(Node, usize)> {
        let mut out: Vec<(Node, usize)> = self.topo.iter().map(|&j| (Node::Root, j)).collect();
        for &i in &self.branching {
            out.extend(self.children[i].iter().map(|&j| (Node::Vertex(i), j)));
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.n() + self.children.iter().map(Vec::len).sum::<usize>()
    }

    /// Number of vertices on the longest chain of nested intervals.
    pub fn depth(&self) -> usize {
        let mut level = vec![1usize; self.n()];
        for &j in &self.topo {
            if let Some(best) = self.containers[j].iter().map(|&i| level[i]).max() {
                level[j] = best + 1;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(raw: &[(i64, i64)]) -> ContainmentDag {
        ContainmentDag::new(&IntervalRepresentation::normalize(raw).unwrap())
    }

    #[test]
    fn path_instance_arcs() {
        let d = dag(&[(3, 5), (1, 4), (2, 6)]);
        let mut arcs = d.arcs();
        arcs.sort();
        assert_eq!(
            arcs,
            vec![
                (Node::Root, 0),
                (Node::Root, 1),
                (Node::Root, 2),
                (Node::Vertex(2), 0)
            ]
        );
        assert_eq!(d.branching(), &[2]);
    }

    #[test]
    fn single_vertex() {
        let d = dag(&[(1, 2)]);
        assert_eq!(d.arcs(), vec![(Node::Root, 0)]);
        assert!(d.branching().is_empty());
        assert_eq!(d.depth(), 1);
    }

    #[test]
    fn pentagon_branching() {
        let d = dag(&[(1, 4), (3, 6), (5, 8), (7, 10), (2, 9)]);
        assert_eq!(d.branching(), &[4]);
        assert_eq!(d.children(Node::Vertex(4)), &[1, 2]);
        assert_eq!(d.children(Node::Root).len(), 5);
        assert_eq!(d.arc_count(), 7);
        assert_eq!(d.depth(), 2);
        assert_eq!(d.in_arcs(2).collect::<Vec<_>>(), vec![Node::Root, Node::Vertex(4)]);
    }

    #[test]
    fn nested_depth() {
        let d = dag(&[(1, 8), (2, 7), (3, 6), (4, 5)]);
        assert_eq!(d.depth(), 4);
        assert_eq!(d.children(Node::Vertex(0)), &[1, 2, 3]);
        assert!(d.has_arc(Node::Vertex(0), 3));
        assert!(!d.has_arc(Node::Vertex(3), 0));
    }
}
