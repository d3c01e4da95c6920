//! Simple undirected input graphs.
//!
//! Edges are stored canonically as `(i, j)` with `i < j`, sorted
//! lexicographically; an edge's id is its position in that order.
//! Adjacency is CSR with neighbours sorted ascending.

mod generators;
mod io;

pub use generators::{
    erdos_renyi_edge_target, gen_barabasi_albert, gen_erdos_renyi_connected, gen_random_cubic,
};
pub use io::{format_graph, parse_graph, read_graph, write_graph};

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<u32>,
    /// `(neighbour, edge id)`, sorted by neighbour within each vertex.
    adj: Vec<(u32, u32)>,
}

impl InputGraph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range vertices.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b) as u32, a.max(b) as u32));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut deg = vec![0u32; n];
        for &(a, b) in &edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0u32);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill: Vec<u32> = offsets[..n].to_vec();
        let mut adj = vec![(0u32, 0u32); edges.len() * 2];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj[fill[a as usize] as usize] = (b, id as u32);
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = (a, id as u32);
            fill[b as usize] += 1;
        }
        for v in 0..n {
            adj[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        InputGraph { n, edges, offsets, adj }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut e = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                e.push((a, b));
            }
        }
        Self::from_sorted(n, e)
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list; index = edge id.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        let (a, b) = self.edges[id];
        (a as usize, b as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    /// Neighbours of `v` with edge ids, ascending by neighbour.
    #[inline]
    pub fn adjacency(&self, v: usize) -> &[(u32, u32)] {
        &self.adj[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency(v).iter().map(|&(u, _)| u as usize)
    }

    /// Id of edge `{a, b}`, if present.
    #[inline]
    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        let (a, b) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        let row = self.adjacency(a);
        // Rows are short for sparse graphs; a linear scan beats binary search there.
        if row.len() <= 8 {
            row.iter().find(|&&(u, _)| u as usize == b).map(|&(_, id)| id as usize)
        } else {
            row.binary_search_by_key(&(b as u32), |&(u, _)| u)
                .ok()
                .map(|k| row[k].1 as usize)
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    /// Number of vertices with each degree, indexed by degree.
    pub fn degree_histogram(&self) -> Vec<usize> {
        let max = (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0);
        let mut h = vec![0; max + 1];
        for v in 0..self.n {
            h[self.degree(v)] += 1;
        }
        h
    }

    /// BFS connectivity check; the empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }
}
