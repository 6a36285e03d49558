//! Simple graphs and their exact hop-distance matrices.
//!
//! [`SimpleGraph`] is any finite simple graph, possibly disconnected; it is the
//! operand type for [`SimpleGraph::join`], [`SimpleGraph::complement`] and
//! [`SimpleGraph::cartesian_product`]. [`Graph`] is a connected simple graph
//! together with its all-pairs BFS distance matrix, computed once at
//! construction. Everything measure-related works on a [`DistanceMatrix`].

mod distance;
pub mod generators;
mod io;

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use distance::DistanceMatrix;
pub use generators::{generate, Family};
pub use io::{parse_graph, parse_simple_graph, to_dot, DotOptions, GraphDocument};

/// A finite simple graph on vertices `0..n`. No connectivity requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    /// Sorted neighbour lists.
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl SimpleGraph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Builds a graph from unordered pairs. Self-loops, repeated pairs and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adj[u].contains(&v) {
                return Err(Error::MultiEdge(u.min(v), u.max(v)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            adj,
            labels: None,
        })
    }

    /// Builds a graph from a symmetric boolean matrix with empty diagonal.
    pub fn from_adjacency(matrix: &[Vec<bool>]) -> Result<Self> {
        let n = matrix.len();
        let mut edges = Vec::new();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if row[i] {
                return Err(Error::SelfLoop(i));
            }
            for j in (i + 1)..n {
                if row[j] != matrix[j][i] {
                    return Err(Error::Parse(format!(
                        "adjacency matrix not symmetric at ({i}, {j})"
                    )));
                }
                if row[j] {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.n]; self.n];
        for (u, v) in self.edges() {
            m[u][v] = true;
            m[v][u] = true;
        }
        m
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.bfs(0).iter().all(Option::is_some)
    }

    pub fn complement(&self) -> Self {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        let mut g = Self::from_edges(self.n, &edges).expect("complement is simple");
        g.labels = self.labels.clone();
        g
    }

    /// Disjoint union plus every edge between the two sides. `self` keeps
    /// indices `0..n`, `other` is shifted to `n..n+m`.
    pub fn join(&self, other: &Self) -> Self {
        let offset = self.n;
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(u, v)| (u + offset, v + offset)));
        for u in 0..self.n {
            for v in 0..other.n {
                edges.push((u, v + offset));
            }
        }
        Self::from_edges(self.n + other.n, &edges).expect("join is simple")
    }

    /// Cartesian product with row-major numbering `(i, j) -> i * |other| + j`.
    pub fn cartesian_product(&self, other: &Self) -> Self {
        let m = other.n;
        let mut edges = Vec::new();
        for i in 0..self.n {
            for (a, b) in other.edges() {
                edges.push((i * m + a, i * m + b));
            }
        }
        for (a, b) in self.edges() {
            for j in 0..m {
                edges.push((a * m + j, b * m + j));
            }
        }
        Self::from_edges(self.n * m, &edges).expect("product is simple")
    }

    /// Checks connectivity and computes distances.
    pub fn into_graph(self) -> Result<Graph> {
        Graph::new(self)
    }
}

/// A connected simple graph with its cached BFS distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    simple: SimpleGraph,
    distances: DistanceMatrix,
}

impl Graph {
    pub fn new(simple: SimpleGraph) -> Result<Self> {
        if simple.n == 0 {
            return Err(Error::BadParameter("graph has no vertices".into()));
        }
        if let Some(unreached) = simple.bfs(0).iter().position(Option::is_none) {
            return Err(Error::Disconnected { unreached });
        }
        let distances = all_pairs_distances(&simple);
        Ok(Self { simple, distances })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(SimpleGraph::from_edges(n, edges)?)
    }

    pub fn n(&self) -> usize {
        self.simple.n
    }

    pub fn simple(&self) -> &SimpleGraph {
        &self.simple
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.distances.get(u, v)
    }

    pub fn diameter(&self) -> u32 {
        self.distances.diameter()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.simple.has_edge(u, v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simple.edges()
    }

    pub fn join(&self, other: &SimpleGraph) -> Graph {
        Graph::new(self.simple.join(other)).expect("join of nonempty graphs is connected")
    }
}

/// BFS from every source, one source per rayon task. Requires a connected
/// graph.
fn all_pairs_distances(g: &SimpleGraph) -> DistanceMatrix {
    let rows: Vec<Vec<u32>> = (0..g.n)
        .into_par_iter()
        .map(|s| {
            g.bfs(s)
                .into_iter()
                .map(|d| d.expect("graph is connected"))
                .collect()
        })
        .collect();
    DistanceMatrix::from_rows_unchecked(rows)
}

/// Joins two raw vertex sets; the result is always connected when both sides
/// are nonempty.
pub fn join(g: &SimpleGraph, h: &SimpleGraph) -> Result<Graph> {
    Graph::new(g.join(h))
}
