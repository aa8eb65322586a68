use thiserror::Error;

use crate::dag::{ContainmentDag, Node};
use crate::graph::CircleGraph;
use crate::interval::IntervalRepresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {0} has no color")]
    MissingVertex(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("arc set is not an arborescence of the containment DAG at vertex {vertex}")]
    NotArborescence { vertex: usize },
    #[error("children of node {node} do not form a chain")]
    C1Violated { node: Node },
    #[error("root children contain an antichain of size {antichain} > {limit}")]
    C2Violated { antichain: usize, limit: usize },
    #[error("vertex {vertex} must enter the layered DAG exactly once")]
    D0Violated { vertex: usize },
    #[error("layer copy ({vertex}.{layer}) has children that are not a chain or has no entering arc")]
    D1Violated { vertex: usize, layer: usize },
    #[error("root children contain an antichain of size {antichain} > {limit}")]
    D2Violated { antichain: usize, limit: usize },
}

/// A spanning arborescence of the containment DAG, stored as one parent
/// per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arborescence {
    parent: Vec<Node>,
}

impl Arborescence {
    /// Every vertex hangs off the root.
    pub fn flat(n: usize) -> Self {
        Arborescence {
            parent: vec![Node::Root; n],
        }
    }

    pub fn from_parents(parent: Vec<Node>) -> Self {
        Arborescence { parent }
    }

    /// Build from an arc list; every vertex `< n` needs exactly one
    /// entering arc.
    pub fn from_arcs(n: usize, arcs: &[(Node, usize)]) -> Result<Self, DecodeError> {
        let mut parent: Vec<Option<Node>> = vec![None; n];
        for &(from, to) in arcs {
            if to >= n || parent[to].is_some() {
                return Err(DecodeError::NotArborescence { vertex: to });
            }
            parent[to] = Some(from);
        }
        let parent = parent
            .into_iter()
            .enumerate()
            .map(|(v, p)| p.ok_or(DecodeError::NotArborescence { vertex: v }))
            .collect::<Result<_, _>>()?;
        Ok(Arborescence { parent })
    }

    /// `T(φ)`: each vertex's parent is the smallest interval of its own
    /// color strictly containing it, or the root if there is none.
    pub fn from_coloring(rep: &IntervalRepresentation, colors: &[usize]) -> Self {
        let n = rep.len();
        let parent = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| colors[i] == colors[j] && rep.contains(i, j))
                    .max_by_key(|&i| rep.interval(i).left)
                    .map_or(Node::Root, Node::Vertex)
            })
            .collect();
        Arborescence { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Node {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Node] {
        &self.parent
    }

    pub fn arcs(&self) -> Vec<(Node, usize)> {
        self.parent.iter().enumerate().map(|(v, &p)| (p, v)).collect()
    }

    /// `Ch(T, node)` in ascending vertex order.
    pub fn children(&self, node: Node) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v] == node).collect()
    }

    /// All child lists at once; index 0 is the root, `v + 1` is vertex `v`.
    pub fn child_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.parent.len() + 1];
        for (v, p) in self.parent.iter().enumerate() {
            lists[p.id()].push(v);
        }
        lists
    }

    /// Arcs on the path from the root to `v` (the stack height of `v`).
    /// Only meaningful once every arc is known to lie in the DAG.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 1;
        let mut cur = self.parent[v];
        while let Node::Vertex(u) = cur {
            d += 1;
            cur = self.parent[u];
            assert!(d <= self.parent.len(), "parent pointers contain a cycle");
        }
        d
    }

    /// First vertex whose parent arc is not in the DAG.
    pub fn check_arcs(&self, dag: &ContainmentDag) -> Result<(), DecodeError> {
        match (0..self.parent.len()).find(|&v| !dag.has_arc(self.parent[v], v)) {
            Some(vertex) => Err(DecodeError::NotArborescence { vertex }),
            None => Ok(()),
        }
    }
}

/// A vertex coloring with colors `1..=num_colors`, optionally carrying the
/// arborescence it was decoded from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    certificate: Option<Arborescence>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring {
            colors,
            certificate: None,
        }
    }

    pub fn with_certificate(mut self, tree: Arborescence) -> Self {
        self.certificate = Some(tree);
        self
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn certificate(&self) -> Option<&Arborescence> {
        self.certificate.as_ref()
    }

    /// Color classes; class `k` holds the vertices with color `k + 1`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors()];
        for (v, &c) in self.colors.iter().enumerate() {
            if c > 0 {
                classes[c - 1].push(v);
            }
        }
        classes
    }
}

/// True iff adjacent vertices get distinct colors. Color 0 or a short
/// color vector counts as a missing vertex.
pub fn validate_coloring(graph: &CircleGraph, coloring: &Coloring) -> Result<bool, ColoringError> {
    let colors = coloring.colors();
    if let Some(v) = (0..graph.n()).find(|&v| colors.get(v).is_none_or(|&c| c == 0)) {
        return Err(ColoringError::MissingVertex(v));
    }
    Ok(graph.edges().into_iter().all(|(i, j)| colors[i] != colors[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> (IntervalRepresentation, CircleGraph) {
        let rep = IntervalRepresentation::normalize(&[(3, 5), (1, 4), (2, 6)]).unwrap();
        let g = CircleGraph::from_intervals(&rep);
        (rep, g)
    }

    fn pentagon() -> (IntervalRepresentation, CircleGraph) {
        let rep =
            IntervalRepresentation::normalize(&[(1, 4), (3, 6), (5, 8), (7, 10), (2, 9)]).unwrap();
        let g = CircleGraph::from_intervals(&rep);
        (rep, g)
    }

    #[test]
    fn validate_examples() {
        let (_, g) = p3();
        assert_eq!(validate_coloring(&g, &Coloring::new(vec![1, 2, 1])), Ok(true));
        assert_eq!(validate_coloring(&g, &Coloring::new(vec![1, 1, 2])), Ok(false));
        let (_, c5) = pentagon();
        assert_eq!(validate_coloring(&c5, &Coloring::new(vec![1, 2, 1, 2, 3])), Ok(true));
    }

    #[test]
    fn validate_missing() {
        let (_, g) = p3();
        assert_eq!(
            validate_coloring(&g, &Coloring::new(vec![1, 2])),
            Err(ColoringError::MissingVertex(2))
        );
        assert_eq!(
            validate_coloring(&g, &Coloring::new(vec![0, 2, 1])),
            Err(ColoringError::MissingVertex(0))
        );
    }

    #[test]
    fn tree_of_coloring() {
        let (rep, _) = p3();
        let t = Arborescence::from_coloring(&rep, &[1, 2, 1]);
        assert_eq!(t.parents(), &[Node::Vertex(2), Node::Root, Node::Root]);
        assert_eq!(t.depth(0), 2);
        assert_eq!(t.children(Node::Root), vec![1, 2]);
    }

    #[test]
    fn tree_picks_smallest_container() {
        let rep = IntervalRepresentation::normalize(&[(1, 8), (2, 7), (3, 6)]).unwrap();
        let t = Arborescence::from_coloring(&rep, &[1, 1, 1]);
        assert_eq!(t.parents(), &[Node::Root, Node::Vertex(0), Node::Vertex(1)]);
        assert!(t.check_arcs(&ContainmentDag::new(&rep)).is_ok());
    }

    #[test]
    fn from_arcs_rejects_bad_sets() {
        assert_eq!(
            Arborescence::from_arcs(2, &[(Node::Root, 0)]),
            Err(DecodeError::NotArborescence { vertex: 1 })
        );
        assert_eq!(
            Arborescence::from_arcs(1, &[(Node::Root, 0), (Node::Root, 0)]),
            Err(DecodeError::NotArborescence { vertex: 0 })
        );
    }

    #[test]
    fn classes_and_count() {
        let c = Coloring::new(vec![2, 1, 2]);
        assert_eq!(c.num_colors(), 2);
        assert_eq!(c.classes(), vec![vec![1], vec![0, 2]]);
    }
}
