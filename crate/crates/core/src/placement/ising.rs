//! Compiling an Ising model onto hardware through a minor embedding.
//!
//! With energy `H = -sum J_ij s_i s_j - sum h_i s_i`, a positive coupling is
//! ferromagnetic. Each logical coupling lands on one hardware edge between
//! the two chains, chain-internal edges get a ferromagnetic strength
//! `c_chain * (sum_j |J_ij| + |h_i|)`, and each field is split evenly over
//! the chain's cells.

use super::{verify_chains, Placement};
use crate::graphs::InputGraph;
use crate::hardware::KingGraph;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// A logical Ising instance. `J` lists each unordered pair at most once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    pub h: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<(usize, usize, f64)>,
}

/// Hardware parameters. Couplers are `(a, b, value)` with `a < b` cell indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardwareIsing {
    #[serde(rename = "L")]
    pub side: usize,
    /// Field per cell, zero on unused cells.
    pub fields: Vec<f64>,
    /// One coupler per logical edge, in input-edge order.
    pub inter_chain: Vec<(usize, usize, f64)>,
    /// Chain-internal couplers, grouped by vertex.
    pub chain: Vec<(usize, usize, f64)>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CompileError {
    #[error("invalid Ising model: {0}")]
    Model(String),
    #[error("placement is not a minor embedding of the coupling graph")]
    NotAnEmbedding,
    #[error("chain scale must be positive and finite, got {0}")]
    ChainScale(f64),
}

impl IsingModel {
    /// The graph of nonzero couplings.
    pub fn support(&self) -> Result<InputGraph, CompileError> {
        let edges = self.j.iter().filter(|t| t.2 != 0.0).map(|&(a, b, _)| (a, b));
        InputGraph::new(self.h.len(), edges).map_err(|e| CompileError::Model(e.to_string()))
    }
}

pub fn compile_ising(
    model: &IsingModel,
    placement: &Placement,
    king: &KingGraph,
    c_chain: f64,
) -> Result<HardwareIsing, CompileError> {
    if !(c_chain > 0.0 && c_chain.is_finite()) {
        return Err(CompileError::ChainScale(c_chain));
    }
    if model.h.iter().chain(model.j.iter().map(|t| &t.2)).any(|v| !v.is_finite()) {
        return Err(CompileError::Model("non-finite parameter".into()));
    }
    let graph = model.support()?;
    let chains = placement.chains();
    if !verify_chains(&chains, &graph, king).is_minor_embedding {
        return Err(CompileError::NotAnEmbedding);
    }
    let n = graph.vertex_count();
    let mut weight = vec![0.0; graph.edge_count()];
    for &(a, b, v) in &model.j {
        if v != 0.0 {
            weight[graph.edge_id(a, b).unwrap()] = v;
        }
    }
    let mut owner = vec![usize::MAX; king.cell_count()];
    for (i, ch) in chains.iter().enumerate() {
        for &c in ch {
            owner[c] = i;
        }
    }

    let mut best: Vec<Option<(usize, usize)>> = vec![None; graph.edge_count()];
    for (a, b) in king.edges() {
        let (x, y) = (owner[a], owner[b]);
        if x == usize::MAX || y == usize::MAX || x == y {
            continue;
        }
        if let Some(e) = graph.edge_id(x, y) {
            let pair = (a.min(b), a.max(b));
            if best[e].is_none_or(|p| pair < p) {
                best[e] = Some(pair);
            }
        }
    }
    let inter_chain = best
        .iter()
        .zip(&weight)
        .map(|(p, &w)| {
            let (a, b) = p.expect("verified embedding represents every edge");
            (a, b, w)
        })
        .collect();

    let mut chain_couplers = Vec::new();
    for i in 0..n {
        let strength = c_chain
            * (graph.adjacency(i).iter().map(|&(_, e)| weight[e as usize].abs()).sum::<f64>() + model.h[i].abs());
        for (a, b) in chain_edges(&chains[i], placement.is_path_form(), king, &owner, i) {
            chain_couplers.push((a.min(b), a.max(b), strength));
        }
    }

    let mut fields = vec![0.0; king.cell_count()];
    for (i, ch) in chains.iter().enumerate() {
        let share = model.h[i] / ch.len() as f64;
        let mut running = 0.0;
        for &c in &ch[..ch.len() - 1] {
            fields[c] = share;
            running += share;
        }
        // The last cell absorbs rounding so the chain sum is exact.
        fields[*ch.last().unwrap()] = model.h[i] - running;
    }

    Ok(HardwareIsing { side: king.side(), fields, inter_chain, chain: chain_couplers })
}

/// Path edges for path-ordered chains, otherwise a BFS spanning tree rooted
/// at the smallest cell.
fn chain_edges(chain: &[usize], path: bool, king: &KingGraph, owner: &[usize], i: usize) -> Vec<(usize, usize)> {
    if path {
        return chain.windows(2).map(|w| (w[0], w[1])).collect();
    }
    let root = *chain.iter().min().unwrap();
    let mut seen = std::collections::HashSet::from([root]);
    let mut q = VecDeque::from([root]);
    let mut out = Vec::with_capacity(chain.len() - 1);
    while let Some(c) = q.pop_front() {
        for &w in king.neighbors(c) {
            let w = w as usize;
            if owner[w] == i && seen.insert(w) {
                out.push((c, w));
                q.push_back(w);
            }
        }
    }
    out
}
