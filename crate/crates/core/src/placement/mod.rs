//! Super-vertex placements with incremental edge scoring.
//!
//! A [`Placement`] maps every input vertex `i` to a chain `phi(i)` of
//! hardware cells. Alongside the chains it keeps the inverse cell labelling,
//! per-chain path links (while annealing) and, for every input edge, the
//! number `N(i,j)` of hardware edges joining `phi(i)` and `phi(j)`. The
//! score `E_emb` is the number of input edges with `N > 0`.
//!
//! Moves are evaluated first (`evaluate_shift`, `evaluate_swap`), which only
//! fills a scratch delta buffer, and then optionally committed.

mod io;
mod ising;
mod verify;

pub use io::{
    format_placement, parse_placement, read_placement, write_placement, PlacementFile, PlacementFileError,
};
pub use ising::{compile_ising, CompileError, HardwareIsing, IsingModel};
pub use verify::{verify_chains, Verdict, Violation};

use crate::graphs::InputGraph;
use crate::hardware::KingGraph;
use std::collections::VecDeque;
use thiserror::Error;

/// Label of an unassigned cell.
pub const FREE: u32 = u32::MAX;
const NIL: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlacementError {
    #[error("expected {expected} chains, got {found}")]
    ChainCount { expected: usize, found: usize },
    #[error("chain {0} is empty")]
    EmptyChain(usize),
    #[error("cell {cell} of chain {vertex} is outside the grid")]
    CellOutOfRange { vertex: usize, cell: usize },
    #[error("cell {cell} is used by chains {first} and {second}")]
    Overlap { cell: usize, first: usize, second: usize },
    #[error("chain {0} is not a path")]
    NotAPath(usize),
    #[error("chain {0} is not connected")]
    Disconnected(usize),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("operation needs path-ordered chains")]
    NotPathForm,
}

/// Move leaf `cell` out of chain `from` and append it to chain `to` next to
/// `to`'s leaf `attach`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shift {
    pub cell: usize,
    pub from: usize,
    pub to: usize,
    pub attach: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pending {
    None,
    Shift(Shift),
    Swap(usize, usize),
}

/// Per-edge count deltas of the move under evaluation.
#[derive(Clone, Debug)]
struct Scratch {
    delta: Vec<i32>,
    stamp: Vec<u32>,
    epoch: u32,
    touched: Vec<u32>,
}

impl Scratch {
    fn new(m: usize) -> Self {
        Scratch { delta: vec![0; m], stamp: vec![0; m], epoch: 0, touched: Vec::new() }
    }

    fn begin(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.touched.clear();
    }

    #[inline]
    fn add(&mut self, e: usize, d: i32) {
        if self.stamp[e] != self.epoch {
            self.stamp[e] = self.epoch;
            self.delta[e] = 0;
            self.touched.push(e as u32);
        }
        self.delta[e] += d;
    }
}

#[derive(Clone, Debug)]
pub struct Placement {
    side: usize,
    label: Vec<u32>,
    /// Cells of each chain, unordered.
    cells: Vec<Vec<u32>>,
    /// Position of each labelled cell inside its `cells` vector.
    slot: Vec<u32>,
    prev: Vec<u32>,
    next: Vec<u32>,
    head: Vec<u32>,
    tail: Vec<u32>,
    path_form: bool,
    /// Chains with more than one cell, for uniform sampling.
    multi: Vec<u32>,
    multi_slot: Vec<u32>,
    reps: Vec<u32>,
    embedded: usize,
    scratch: Scratch,
    pending: Pending,
}

impl Placement {
    /// Builds a placement whose chains are paths given in path order.
    pub fn from_paths(
        graph: &InputGraph,
        king: &KingGraph,
        chains: &[Vec<usize>],
    ) -> Result<Self, PlacementError> {
        let p = Self::build(graph, king, chains, true)?;
        for (i, c) in chains.iter().enumerate() {
            if c.windows(2).any(|w| !king.is_adjacent(w[0], w[1])) {
                return Err(PlacementError::NotAPath(i));
            }
        }
        Ok(p)
    }

    /// Builds a placement from arbitrary connected chains.
    pub fn from_sets(
        graph: &InputGraph,
        king: &KingGraph,
        chains: &[Vec<usize>],
    ) -> Result<Self, PlacementError> {
        let p = Self::build(graph, king, chains, false)?;
        for i in 0..chains.len() {
            if !p.chain_is_connected(king, i) {
                return Err(PlacementError::Disconnected(i));
            }
        }
        Ok(p)
    }

    fn build(
        graph: &InputGraph,
        king: &KingGraph,
        chains: &[Vec<usize>],
        path_form: bool,
    ) -> Result<Self, PlacementError> {
        let n = graph.vertex_count();
        if chains.len() != n {
            return Err(PlacementError::ChainCount { expected: n, found: chains.len() });
        }
        let cells_total = king.cell_count();
        let mut label = vec![FREE; cells_total];
        let mut slot = vec![NIL; cells_total];
        let mut prev = vec![NIL; cells_total];
        let mut next = vec![NIL; cells_total];
        let mut head = vec![NIL; n];
        let mut tail = vec![NIL; n];
        let mut cells = Vec::with_capacity(n);
        for (i, chain) in chains.iter().enumerate() {
            if chain.is_empty() {
                return Err(PlacementError::EmptyChain(i));
            }
            for (k, &c) in chain.iter().enumerate() {
                if c >= cells_total {
                    return Err(PlacementError::CellOutOfRange { vertex: i, cell: c });
                }
                if label[c] != FREE {
                    return Err(PlacementError::Overlap { cell: c, first: label[c] as usize, second: i });
                }
                label[c] = i as u32;
                slot[c] = k as u32;
                if path_form {
                    if k > 0 {
                        prev[c] = chain[k - 1] as u32;
                    }
                    if k + 1 < chain.len() {
                        next[c] = chain[k + 1] as u32;
                    }
                }
            }
            if path_form {
                head[i] = chain[0] as u32;
                tail[i] = *chain.last().unwrap() as u32;
            }
            cells.push(chain.iter().map(|&c| c as u32).collect::<Vec<u32>>());
        }
        let mut multi = Vec::new();
        let mut multi_slot = vec![NIL; n];
        for (i, c) in cells.iter().enumerate() {
            if c.len() > 1 {
                multi_slot[i] = multi.len() as u32;
                multi.push(i as u32);
            }
        }
        let m = graph.edge_count();
        let mut p = Placement {
            side: king.side(),
            label,
            cells,
            slot,
            prev,
            next,
            head,
            tail,
            path_form,
            multi,
            multi_slot,
            reps: vec![0; m],
            embedded: 0,
            scratch: Scratch::new(m),
            pending: Pending::None,
        };
        p.reps = p.recount_edge_reps(graph, king);
        p.embedded = p.reps.iter().filter(|&&r| r > 0).count();
        Ok(p)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn vertex_count(&self) -> usize {
        self.cells.len()
    }

    /// `E_emb`, maintained incrementally.
    pub fn embedded_edges(&self) -> usize {
        self.embedded
    }

    /// `N(i,j)` per input edge id.
    pub fn edge_reps(&self) -> &[u32] {
        &self.reps
    }

    /// Raw cell labels; [`FREE`] for unassigned cells.
    pub fn labels(&self) -> &[u32] {
        &self.label
    }

    pub fn label(&self, cell: usize) -> Option<usize> {
        match self.label[cell] {
            FREE => None,
            l => Some(l as usize),
        }
    }

    /// Cells of chain `i` in storage order (not path order).
    pub fn chain_cells(&self, i: usize) -> &[u32] {
        &self.cells[i]
    }

    pub fn chain_len(&self, i: usize) -> usize {
        self.cells[i].len()
    }

    /// Whether chain links describe paths (true until terminal search edits chains).
    pub fn is_path_form(&self) -> bool {
        self.path_form
    }

    /// The two path endpoints of chain `i`; equal for single-cell chains.
    pub fn leaves(&self, i: usize) -> Option<(usize, usize)> {
        self.path_form.then(|| (self.head[i] as usize, self.tail[i] as usize))
    }

    #[inline]
    pub fn is_leaf(&self, cell: usize) -> bool {
        match self.label[cell] {
            FREE => false,
            l => self.path_form && (self.head[l as usize] as usize == cell || self.tail[l as usize] as usize == cell),
        }
    }

    /// Chains with at least two cells.
    pub fn multi_cell_chains(&self) -> &[u32] {
        &self.multi
    }

    pub fn free_cells(&self) -> Vec<usize> {
        (0..self.label.len()).filter(|&c| self.label[c] == FREE).collect()
    }

    /// Chains as cell lists: path order in path form, ascending otherwise.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        (0..self.cells.len()).map(|i| self.chain(i)).collect()
    }

    pub fn chain(&self, i: usize) -> Vec<usize> {
        if self.path_form {
            let mut out = Vec::with_capacity(self.cells[i].len());
            let mut c = self.head[i];
            while c != NIL {
                out.push(c as usize);
                c = self.next[c as usize];
            }
            out
        } else {
            let mut out: Vec<usize> = self.cells[i].iter().map(|&c| c as usize).collect();
            out.sort_unstable();
            out
        }
    }

    /// `N(i,j)` for every input edge by a full scan of the hardware edges.
    pub fn recount_edge_reps(&self, graph: &InputGraph, king: &KingGraph) -> Vec<u32> {
        let mut reps = vec![0u32; graph.edge_count()];
        for (a, b) in king.edges() {
            let (x, y) = (self.label[a], self.label[b]);
            if x != FREE && y != FREE && x != y {
                if let Some(e) = graph.edge_id(x as usize, y as usize) {
                    reps[e] += 1;
                }
            }
        }
        reps
    }

    /// `E_emb` by full scan, independent of the incremental counters.
    pub fn count_embedded_edges(&self, graph: &InputGraph, king: &KingGraph) -> usize {
        self.recount_edge_reps(graph, king).iter().filter(|&&r| r > 0).count()
    }

    /// Checks M1, M2 and M3 plus internal consistency.
    pub fn verify(&self, graph: &InputGraph, king: &KingGraph) -> Verdict {
        let mut verdict = verify_chains(&self.chains(), graph, king);
        for (i, cells) in self.cells.iter().enumerate() {
            for (k, &c) in cells.iter().enumerate() {
                if self.label[c as usize] != i as u32 || self.slot[c as usize] != k as u32 {
                    verdict.push(Violation::LabelMismatch {
                        cell: c as usize,
                        label: self.label(c as usize),
                        chain: i,
                    });
                }
            }
        }
        let listed: usize = self.cells.iter().map(Vec::len).sum();
        let labelled = self.label.iter().filter(|&&l| l != FREE).count();
        if listed != labelled {
            for c in 0..self.label.len() {
                let l = self.label[c];
                if l != FREE && (l as usize >= self.cells.len() || self.slot[c] as usize >= self.cells[l as usize].len() || self.cells[l as usize][self.slot[c] as usize] != c as u32) {
                    verdict.push(Violation::LabelMismatch { cell: c, label: self.label(c), chain: l as usize });
                }
            }
        }
        verdict
    }

    /// Full internal audit: labels, slots, path links, multi set and counters.
    pub fn check_invariants(&self, graph: &InputGraph, king: &KingGraph) -> Result<(), String> {
        let v = self.verify(graph, king);
        if !v.is_super_vertex_placement {
            return Err(format!("structural violations: {:?}", v.violations));
        }
        for (i, cells) in self.cells.iter().enumerate() {
            let is_multi = self.multi_slot[i] != NIL;
            if is_multi != (cells.len() > 1) {
                return Err(format!("multi set wrong for chain {i}"));
            }
            if is_multi && self.multi[self.multi_slot[i] as usize] != i as u32 {
                return Err(format!("multi slot wrong for chain {i}"));
            }
            if self.path_form {
                let path = self.chain(i);
                if path.len() != cells.len() {
                    return Err(format!("path of chain {i} has {} cells, set has {}", path.len(), cells.len()));
                }
                if path.windows(2).any(|w| !king.is_adjacent(w[0], w[1])) {
                    return Err(format!("chain {i} path has a non-adjacent step"));
                }
                if self.prev[self.head[i] as usize] != NIL || self.tail[i] as usize != *path.last().unwrap() {
                    return Err(format!("chain {i} endpoints inconsistent"));
                }
            }
        }
        if self.multi.len() != self.cells.iter().filter(|c| c.len() > 1).count() {
            return Err("multi set size wrong".into());
        }
        let fresh = self.recount_edge_reps(graph, king);
        if fresh != self.reps {
            return Err("edge representation counts drifted".into());
        }
        let e = fresh.iter().filter(|&&r| r > 0).count();
        if e != self.embedded {
            return Err(format!("E_emb is {} but recount gives {e}", self.embedded));
        }
        Ok(())
    }

    fn chain_is_connected(&self, king: &KingGraph, i: usize) -> bool {
        let cells = &self.cells[i];
        let mut seen = std::collections::HashSet::from([cells[0]]);
        let mut q = VecDeque::from([cells[0] as usize]);
        while let Some(c) = q.pop_front() {
            for &w in king.neighbors(c) {
                if self.label[w as usize] == i as u32 && seen.insert(w) {
                    q.push_back(w as usize);
                }
            }
        }
        seen.len() == cells.len()
    }

    // ---- move evaluation -------------------------------------------------

    #[inline]
    fn add_pair(&mut self, graph: &InputGraph, x: u32, y: u32, d: i32) {
        if x != FREE && y != FREE && x != y {
            if let Some(e) = graph.edge_id(x as usize, y as usize) {
                self.scratch.add(e, d);
            }
        }
    }

    fn scratch_delta(&self) -> i64 {
        self.scratch
            .touched
            .iter()
            .map(|&e| {
                let (n, d) = (self.reps[e as usize] as i64, self.scratch.delta[e as usize] as i64);
                ((n + d > 0) as i64) - ((n > 0) as i64)
            })
            .sum()
    }

    /// Change of `E_emb` if `s` were applied. Preconditions are only
    /// debug-checked; see [`Placement::check_shift`].
    pub fn evaluate_shift(&mut self, graph: &InputGraph, king: &KingGraph, s: Shift) -> i64 {
        debug_assert_eq!(self.check_shift(king, s), Ok(()));
        self.scratch.begin();
        let (i, j) = (s.from as u32, s.to as u32);
        for &w in king.neighbors(s.cell) {
            let x = self.label[w as usize];
            self.add_pair(graph, i, x, -1);
            self.add_pair(graph, j, x, 1);
        }
        self.pending = Pending::Shift(s);
        self.scratch_delta()
    }

    /// Change of `E_emb` if chains `i` and `j` exchanged their cells.
    pub fn evaluate_swap(&mut self, graph: &InputGraph, king: &KingGraph, i: usize, j: usize) -> i64 {
        debug_assert!(i != j);
        self.scratch.begin();
        let (iu, ju) = (i as u32, j as u32);
        for (from, to) in [(i, ju), (j, iu)] {
            let old = from as u32;
            for k in 0..self.cells[from].len() {
                let c = self.cells[from][k] as usize;
                for &w in king.neighbors(c) {
                    let x = self.label[w as usize];
                    // Pairs inside phi(i) u phi(j) keep their unordered key.
                    if x == iu || x == ju {
                        continue;
                    }
                    self.add_pair(graph, old, x, -1);
                    self.add_pair(graph, to, x, 1);
                }
            }
        }
        self.pending = Pending::Swap(i, j);
        self.scratch_delta()
    }

    /// Applies the most recently evaluated move.
    pub fn commit(&mut self) {
        match std::mem::replace(&mut self.pending, Pending::None) {
            Pending::None => panic!("commit without a pending move"),
            Pending::Shift(s) => self.commit_shift(s),
            Pending::Swap(i, j) => self.commit_swap(i, j),
        }
        for k in 0..self.scratch.touched.len() {
            let e = self.scratch.touched[k] as usize;
            let before = self.reps[e] > 0;
            self.reps[e] = (self.reps[e] as i64 + self.scratch.delta[e] as i64) as u32;
            let after = self.reps[e] > 0;
            if before != after {
                if after {
                    self.embedded += 1;
                } else {
                    self.embedded -= 1;
                }
            }
        }
    }

    /// Drops the most recently evaluated move.
    pub fn discard(&mut self) {
        self.pending = Pending::None;
    }

    fn set_multi(&mut self, i: usize) {
        let want = self.cells[i].len() > 1;
        let has = self.multi_slot[i] != NIL;
        if want && !has {
            self.multi_slot[i] = self.multi.len() as u32;
            self.multi.push(i as u32);
        } else if !want && has {
            let k = self.multi_slot[i] as usize;
            self.multi.swap_remove(k);
            if k < self.multi.len() {
                self.multi_slot[self.multi[k] as usize] = k as u32;
            }
            self.multi_slot[i] = NIL;
        }
    }

    fn remove_from_set(&mut self, u: usize) {
        let i = self.label[u] as usize;
        let k = self.slot[u] as usize;
        self.cells[i].swap_remove(k);
        if k < self.cells[i].len() {
            self.slot[self.cells[i][k] as usize] = k as u32;
        }
        self.slot[u] = NIL;
        self.label[u] = FREE;
    }

    fn insert_into_set(&mut self, u: usize, j: usize) {
        self.label[u] = j as u32;
        self.slot[u] = self.cells[j].len() as u32;
        self.cells[j].push(u as u32);
    }

    fn commit_shift(&mut self, s: Shift) {
        let Shift { cell: u, from: i, to: j, attach: v } = s;
        if self.head[i] as usize == u {
            let nx = self.next[u];
            self.head[i] = nx;
            self.prev[nx as usize] = NIL;
        } else {
            let pv = self.prev[u];
            self.tail[i] = pv;
            self.next[pv as usize] = NIL;
        }
        if self.tail[j] as usize == v {
            self.next[v] = u as u32;
            self.prev[u] = v as u32;
            self.next[u] = NIL;
            self.tail[j] = u as u32;
        } else {
            self.prev[v] = u as u32;
            self.next[u] = v as u32;
            self.prev[u] = NIL;
            self.head[j] = u as u32;
        }
        self.remove_from_set(u);
        self.insert_into_set(u, j);
        self.set_multi(i);
        self.set_multi(j);
    }

    fn commit_swap(&mut self, i: usize, j: usize) {
        self.cells.swap(i, j);
        for &c in &self.cells[i] {
            self.label[c as usize] = i as u32;
        }
        for &c in &self.cells[j] {
            self.label[c as usize] = j as u32;
        }
        self.head.swap(i, j);
        self.tail.swap(i, j);
        self.set_multi(i);
        self.set_multi(j);
    }

    /// Validates the preconditions of a shift.
    pub fn check_shift(&self, king: &KingGraph, s: Shift) -> Result<(), PlacementError> {
        let bad = |m: &str| Err(PlacementError::InvalidMove(m.to_string()));
        if !self.path_form {
            return Err(PlacementError::NotPathForm);
        }
        let n = self.cells.len();
        if s.from >= n || s.to >= n || s.from == s.to {
            return bad("source and target must be distinct vertices");
        }
        if s.cell >= self.label.len() || s.attach >= self.label.len() {
            return bad("cell outside the grid");
        }
        if self.label[s.cell] != s.from as u32 || self.label[s.attach] != s.to as u32 {
            return bad("cell labels do not match the chains");
        }
        if self.cells[s.from].len() < 2 {
            return bad("source chain would become empty");
        }
        if !self.is_leaf(s.cell) || !self.is_leaf(s.attach) {
            return bad("both cells must be chain leaves");
        }
        if !king.is_adjacent(s.cell, s.attach) {
            return bad("cells are not adjacent");
        }
        Ok(())
    }

    /// Validated shift; returns the change of `E_emb`.
    pub fn apply_shift(&mut self, graph: &InputGraph, king: &KingGraph, s: Shift) -> Result<i64, PlacementError> {
        self.check_shift(king, s)?;
        let d = self.evaluate_shift(graph, king, s);
        self.commit();
        Ok(d)
    }

    /// Validated swap of chains `i` and `j`; returns the change of `E_emb`.
    pub fn apply_swap(&mut self, graph: &InputGraph, king: &KingGraph, i: usize, j: usize) -> Result<i64, PlacementError> {
        let n = self.cells.len();
        if i == j || i >= n || j >= n {
            return Err(PlacementError::InvalidMove(format!("cannot swap chains {i} and {j}")));
        }
        let d = self.evaluate_swap(graph, king, i, j);
        self.commit();
        Ok(d)
    }

    // ---- terminal-search support ------------------------------------------

    pub(crate) fn edge_reps_mut(&mut self) -> &mut [u32] {
        &mut self.reps
    }

    /// Frees `u` without touching the edge counters; the caller has already
    /// accounted for the hardware edges at `u`.
    pub(crate) fn detach_uncounted(&mut self, u: usize) {
        let i = self.label[u] as usize;
        self.path_form = false;
        self.remove_from_set(u);
        self.set_multi(i);
    }

    /// Assigns free cell `u` to chain `i` and counts its new hardware edges.
    pub(crate) fn attach_free(&mut self, graph: &InputGraph, king: &KingGraph, u: usize, i: usize) {
        debug_assert_eq!(self.label[u], FREE);
        self.path_form = false;
        self.insert_into_set(u, i);
        self.set_multi(i);
        for &w in king.neighbors(u) {
            let x = self.label[w as usize];
            if x != FREE && x != i as u32 {
                if let Some(e) = graph.edge_id(i, x as usize) {
                    if self.reps[e] == 0 {
                        self.embedded += 1;
                    }
                    self.reps[e] += 1;
                }
            }
        }
    }

    /// Forgets path order; chains become plain connected sets.
    pub fn into_set_form(mut self) -> Self {
        self.path_form = false;
        self
    }
}
