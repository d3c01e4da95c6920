//! Independent M1/M2/M3 checker working on raw chain lists.

use crate::graphs::InputGraph;
use crate::hardware::KingGraph;
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Number of chains differs from the vertex count.
    ChainCount { expected: usize, found: usize },
    CellOutOfRange { vertex: usize, cell: usize },
    /// M1: empty chain.
    EmptyChain { vertex: usize },
    /// M1: chain splits into several king-connected components.
    Disconnected { vertex: usize, components: usize },
    /// A chain lists the same cell twice.
    RepeatedCell { vertex: usize, cell: usize },
    /// M2: two chains share a cell.
    Overlap { cell: usize, first: usize, second: usize },
    /// Cell labels disagree with the chain lists.
    LabelMismatch { cell: usize, label: Option<usize>, chain: usize },
    /// M3: input edge with no hardware edge between the chains.
    MissingEdge { i: usize, j: usize },
}

impl Violation {
    fn is_structural(&self) -> bool {
        !matches!(self, Violation::MissingEdge { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub is_super_vertex_placement: bool,
    pub is_minor_embedding: bool,
    /// Number of input edges represented in hardware.
    pub embedded_edges: usize,
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub(crate) fn push(&mut self, v: Violation) {
        if v.is_structural() {
            self.is_super_vertex_placement = false;
        }
        self.is_minor_embedding = false;
        self.violations.push(v);
    }
}

/// Checks chains against M1 (non-empty, connected), M2 (disjoint) and M3
/// (every input edge joined by a hardware edge). All violations are listed.
pub fn verify_chains(chains: &[Vec<usize>], graph: &InputGraph, king: &KingGraph) -> Verdict {
    let mut verdict = Verdict {
        is_super_vertex_placement: true,
        is_minor_embedding: true,
        embedded_edges: 0,
        violations: Vec::new(),
    };
    let n = graph.vertex_count();
    if chains.len() != n {
        verdict.push(Violation::ChainCount { expected: n, found: chains.len() });
    }
    let cells = king.cell_count();
    let mut owner: Vec<Option<usize>> = vec![None; cells];
    for (i, chain) in chains.iter().enumerate() {
        if chain.is_empty() {
            verdict.push(Violation::EmptyChain { vertex: i });
        }
        for &c in chain {
            if c >= cells {
                verdict.push(Violation::CellOutOfRange { vertex: i, cell: c });
                continue;
            }
            match owner[c] {
                None => owner[c] = Some(i),
                Some(o) if o == i => verdict.push(Violation::RepeatedCell { vertex: i, cell: c }),
                Some(o) => verdict.push(Violation::Overlap { cell: c, first: o, second: i }),
            }
        }
    }
    // Component count with the chain's own cell list as membership.
    for (i, chain) in chains.iter().enumerate() {
        let mut members: Vec<usize> = chain.iter().copied().filter(|&c| c < cells).collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            continue;
        }
        let mut seen = std::collections::HashSet::new();
        let mut components = 0;
        for &start in &members {
            if !seen.insert(start) {
                continue;
            }
            components += 1;
            let mut q = VecDeque::from([start]);
            while let Some(c) = q.pop_front() {
                for &w in king.neighbors(c) {
                    let w = w as usize;
                    if members.binary_search(&w).is_ok() && seen.insert(w) {
                        q.push_back(w);
                    }
                }
            }
        }
        if components > 1 {
            verdict.push(Violation::Disconnected { vertex: i, components });
        }
    }
    // M3 over input edges, using first-owner labels.
    let mut represented = vec![false; graph.edge_count()];
    for (a, b) in king.edges() {
        if let (Some(x), Some(y)) = (owner[a], owner[b]) {
            if x != y && x < n && y < n {
                if let Some(e) = graph.edge_id(x, y) {
                    represented[e] = true;
                }
            }
        }
    }
    verdict.embedded_edges = represented.iter().filter(|&&r| r).count();
    for (e, (i, j)) in graph.edges().enumerate() {
        if !represented[e] {
            verdict.push(Violation::MissingEdge { i, j });
        }
    }
    verdict
}
