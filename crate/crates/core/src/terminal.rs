//! Terminal search: free hardware cells by deleting simple points from
//! chains, then route missing edges through the free cells with BFS.
//!
//! A cell `u` of chain `i` may be deleted when
//! * its same-chain ring neighbours form one king-connected cluster (p1), and
//! * for every foreign chain `j` with `(i, j)` an input edge, the hardware
//!   edges at `u` are not all of the representations of `(i, j)` (p2).

use crate::graphs::InputGraph;
use crate::hardware::{Direction, KingGraph, NO_CELL};
use crate::placement::{Placement, FREE};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TerminalError {
    #[error("cell {0} is not assigned to a chain")]
    Unlabeled(usize),
    #[error("({0}, {1}) is not an input edge")]
    NotAnEdge(usize, usize),
    #[error("edge ({0}, {1}) is already represented")]
    AlreadyLinked(usize, usize),
}

/// Deletability of a cell indexed by its 8-bit ring pattern. Bit `k` is set
/// when the neighbour in direction `Direction::ALL[k]` is in the same chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletablePatternTable {
    entries: [bool; 256],
}

impl DeletablePatternTable {
    #[inline]
    pub fn get(&self, pattern: u8) -> bool {
        self.entries[pattern as usize]
    }

    pub fn entries(&self) -> &[bool; 256] {
        &self.entries
    }
}

impl Default for DeletablePatternTable {
    fn default() -> Self {
        build_pattern_table()
    }
}

/// Whether ring positions `a` and `b` are a king move apart.
fn ring_adjacent(a: usize, b: usize) -> bool {
    let (ra, ca) = Direction::ALL[a].offset();
    let (rb, cb) = Direction::ALL[b].offset();
    a != b && (ra - rb).abs() <= 1 && (ca - cb).abs() <= 1
}

pub fn build_pattern_table() -> DeletablePatternTable {
    let mut entries = [false; 256];
    for (pattern, entry) in entries.iter_mut().enumerate() {
        if pattern == 0 {
            continue;
        }
        let start = pattern.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in 0..8 {
                if pattern & (1 << b) != 0 && seen & (1 << b) == 0 && ring_adjacent(a, b) {
                    seen |= 1 << b;
                    stack.push(b);
                }
            }
        }
        *entry = seen as usize == pattern;
    }
    DeletablePatternTable { entries }
}

/// Ring occupancy pattern of `u` with respect to its own chain.
pub fn ring_pattern(p: &Placement, king: &KingGraph, u: usize) -> u8 {
    let own = p.labels()[u];
    let mut bits = 0u8;
    for (k, &w) in king.ring(u).iter().enumerate() {
        if w != NO_CELL && p.labels()[w as usize] == own {
            bits |= 1 << k;
        }
    }
    bits
}

/// Free hardware cells, kept equal to the unlabelled cells of the placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSet {
    member: Vec<bool>,
    len: usize,
}

impl FreeSet {
    pub fn from_placement(p: &Placement) -> Self {
        let member: Vec<bool> = p.labels().iter().map(|&l| l == FREE).collect();
        let len = member.iter().filter(|&&m| m).count();
        FreeSet { member, len }
    }

    #[inline]
    pub fn contains(&self, cell: usize) -> bool {
        self.member[cell]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cells(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&c| self.member[c]).collect()
    }

    fn insert(&mut self, cell: usize) {
        debug_assert!(!self.member[cell]);
        self.member[cell] = true;
        self.len += 1;
    }

    fn remove(&mut self, cell: usize) {
        debug_assert!(self.member[cell]);
        self.member[cell] = false;
        self.len -= 1;
    }
}

/// Tests p1 and p2 for `u`. When `u` is deletable the representation counts
/// of the edges at `u` are decremented as if `u` were already gone.
pub fn is_deletable(
    p: &mut Placement,
    graph: &InputGraph,
    king: &KingGraph,
    table: &DeletablePatternTable,
    u: usize,
) -> Result<bool, TerminalError> {
    let i = p.label(u).ok_or(TerminalError::Unlabeled(u))?;
    if !table.get(ring_pattern(p, king, u)) {
        return Ok(false);
    }
    // (edge id, hardware edges at u) for each distinct foreign chain.
    let mut tally: [(u32, u32); 8] = [(0, 0); 8];
    let mut k = 0;
    for &w in king.neighbors(u) {
        let x = p.labels()[w as usize];
        if x == FREE || x as usize == i {
            continue;
        }
        if let Some(e) = graph.edge_id(i, x as usize) {
            match tally[..k].iter_mut().find(|t| t.0 == e as u32) {
                Some(t) => t.1 += 1,
                None => {
                    tally[k] = (e as u32, 1);
                    k += 1;
                }
            }
        }
    }
    let reps = p.edge_reps();
    if tally[..k].iter().any(|&(e, n)| n >= reps[e as usize]) {
        return Ok(false);
    }
    let reps = p.edge_reps_mut();
    for &(e, n) in &tally[..k] {
        reps[e as usize] -= n;
    }
    Ok(true)
}

/// Deletes simple points in a cyclic row-major scan until `|V(H)| - 1`
/// consecutive cells were scanned without a deletion.
pub fn cleanup(p: &mut Placement, graph: &InputGraph, king: &KingGraph, table: &DeletablePatternTable) -> FreeSet {
    let mut free = FreeSet::from_placement(p);
    let cells = king.cell_count();
    if cells < 2 {
        return free;
    }
    let mut idle = 0;
    let mut u = 0;
    while idle < cells - 1 {
        let deleted = p.label(u).is_some() && is_deletable(p, graph, king, table, u).expect("labelled");
        if deleted {
            p.detach_uncounted(u);
            free.insert(u);
            idle = 0;
        } else {
            idle += 1;
        }
        u = (u + 1) % cells;
    }
    free
}

/// Grows chain `i` along a shortest path of free cells until it touches
/// chain `j`. Returns whether a path was found; on failure nothing changes.
pub fn bfs_link(
    p: &mut Placement,
    graph: &InputGraph,
    king: &KingGraph,
    free: &mut FreeSet,
    i: usize,
    j: usize,
) -> Result<bool, TerminalError> {
    let e = graph.edge_id(i, j).ok_or(TerminalError::NotAnEdge(i, j))?;
    if p.edge_reps()[e] > 0 {
        return Err(TerminalError::AlreadyLinked(i, j));
    }
    match shortest_free_path(p, king, free, i, j) {
        Some(path) => {
            for &c in &path {
                p.attach_free(graph, king, c, i);
                free.remove(c);
            }
            debug_assert!(p.edge_reps()[e] > 0);
            Ok(true)
        }
        None => Ok(false),
    }
}

/// Free cells of a shortest route from chain `i` to chain `j`, ordered from
/// the `i` side. Sources are expanded in ascending cell order.
pub fn shortest_free_path(p: &Placement, king: &KingGraph, free: &FreeSet, i: usize, j: usize) -> Option<Vec<usize>> {
    const ROOT: u32 = u32::MAX - 1;
    let labels = p.labels();
    let mut parent = vec![NO_CELL; king.cell_count()];
    let mut sources: Vec<u32> = p.chain_cells(i).to_vec();
    sources.sort_unstable();
    let mut queue = VecDeque::with_capacity(sources.len());
    for &s in &sources {
        parent[s as usize] = ROOT;
        queue.push_back(s);
    }
    while let Some(c) = queue.pop_front() {
        for &w in king.neighbors(c as usize) {
            let wu = w as usize;
            if labels[wu] == j as u32 {
                let mut path = Vec::new();
                let mut x = c;
                while parent[x as usize] != ROOT {
                    path.push(x as usize);
                    x = parent[x as usize];
                }
                path.reverse();
                return Some(path);
            }
            if parent[wu] == NO_CELL && free.contains(wu) {
                parent[wu] = c;
                queue.push_back(w);
            }
        }
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalReport {
    pub embedded_before: usize,
    pub embedded_after: usize,
    /// Cells released by cleanup.
    pub freed: usize,
    pub links_attempted: usize,
    pub links_made: usize,
}

/// Cleanup followed by BFS linking of every unrepresented edge, scanning
/// vertices in ascending order and each adjacency list in order.
pub fn terminal_search(mut p: Placement, graph: &InputGraph, king: &KingGraph) -> (Placement, TerminalReport) {
    let table = build_pattern_table();
    let mut report = TerminalReport { embedded_before: p.embedded_edges(), ..Default::default() };
    let before = p.free_cells().len();
    let mut free = cleanup(&mut p, graph, king, &table);
    report.freed = free.len() - before;
    for i in 0..graph.vertex_count() {
        for &(j, e) in graph.adjacency(i) {
            if p.edge_reps()[e as usize] > 0 {
                continue;
            }
            report.links_attempted += 1;
            if bfs_link(&mut p, graph, king, &mut free, i, j as usize).expect("unrepresented input edge") {
                report.links_made += 1;
            }
        }
    }
    report.embedded_after = p.embedded_edges();
    debug_assert_eq!(p.check_invariants(graph, king), Ok(()));
    (p.into_set_form(), report)
}
