use std::fmt::Write as _;

use crate::interval::IntervalRepresentation;

/// Undirected simple graph. Built from an interval representation this is
/// the overlap (circle) graph; [`CircleGraph::from_edges`] exists so the
/// oracles can be exercised on arbitrary small graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleGraph {
    n: usize,
    matrix: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl CircleGraph {
    /// Adjacency by the partial-overlap test. Quadratic in `n`.
    pub fn from_intervals(rep: &IntervalRepresentation) -> Self {
        let n = rep.len();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rep.adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            assert!(i != j && i < n && j < n, "bad edge ({i}, {j})");
            if !g.adjacent(i, j) {
                g.add_edge(i, j);
            }
        }
        g
    }

    fn empty(n: usize) -> Self {
        CircleGraph {
            n,
            matrix: vec![false; n * n],
            neighbors: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, i: usize, j: usize) {
        self.matrix[i * self.n + j] = true;
        self.matrix[j * self.n + i] = true;
        self.neighbors[i].push(j);
        self.neighbors[j].push(i);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.n + j]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(k, &i)| vertices[k + 1..].iter().all(|&j| !self.adjacent(i, j)))
    }

    /// DIMACS edge format with 1-based vertex ids.
    pub fn to_dimacs(&self) -> String {
        let edges = self.edges();
        let mut out = format!("p edge {} {}\n", self.n, edges.len());
        for (i, j) in edges {
            let _ = writeln!(out, "e {} {}", i + 1, j + 1);
        }
        out
    }
}
