//! The complete-graph guiding pattern and related bounds.
//!
//! [`complete_embedding`] lays out `K_{L+1}` on `KG_{L,L}` with paths that
//! cover every cell: two frame chains (top row plus the upper part of the
//! left column, bottom row plus the lower part of the left column) and
//! `L-1` wires crossing the interior rows. The wires trade places by
//! odd-even transposition, each swap crossing two wires through a 2x2 block
//! on its diagonals, so every pair of wires meets at some row. Every wire
//! starts at the top row and ends at the bottom row, which makes it
//! adjacent to both frame chains. The constructor checks the result with
//! the verifier before returning it.

use crate::graphs::InputGraph;
use crate::hardware::KingGraph;
use crate::placement::{verify_chains, Placement, PlacementError};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineError {
    #[error("side length must be at least 2, got {0}")]
    SideTooSmall(usize),
    #[error("guiding pattern for L = {side} failed verification: {detail}")]
    InvalidPattern { side: usize, detail: String },
    #[error("{n} vertices do not fit on {cells} hardware cells")]
    Capacity { n: usize, cells: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("tree decomposition for L = {side} is invalid: {detail}")]
    InvalidDecomposition { side: usize, detail: String },
    #[error("bound needs N >= 4 and d >= 3, got N = {n}, d = {d}")]
    BoundParameters { n: usize, d: usize },
    #[error(transparent)]
    Placement(#[from] PlacementError),
}

/// The `L+1` baseline chains and the per-cell guide label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuidingPattern {
    side: usize,
    guide: Vec<u32>,
    chains: Vec<Vec<usize>>,
}

impl GuidingPattern {
    pub fn side(&self) -> usize {
        self.side
    }

    /// Index of the baseline chain that covers `cell`.
    #[inline]
    pub fn guide(&self, cell: usize) -> usize {
        self.guide[cell] as usize
    }

    pub fn guides(&self) -> &[u32] {
        &self.guide
    }

    /// Baseline chains in path order.
    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    /// The pattern as a placement of `K_{L+1}`.
    pub fn placement(&self, king: &KingGraph) -> Placement {
        Placement::from_paths(&InputGraph::complete(self.side + 1), king, &self.chains)
            .expect("guiding pattern was verified at construction")
    }
}

fn raw_pattern(side: usize) -> Vec<Vec<(usize, usize)>> {
    let l = side;
    if l == 2 {
        return vec![vec![(0, 0), (0, 1)], vec![(1, 0)], vec![(1, 1)]];
    }
    let h = (l - 2) / 2;
    let mut top: Vec<(usize, usize)> = (0..l).rev().map(|c| (0, c)).collect();
    top.extend((1..=h).map(|r| (r, 0)));
    let mut bottom: Vec<(usize, usize)> = (h + 1..l - 1).map(|r| (r, 0)).collect();
    bottom.extend((0..l).map(|c| (l - 1, c)));

    let w = l - 1;
    let mut wires = vec![Vec::with_capacity(l - 2); w];
    let mut at: Vec<usize> = (0..w).collect();
    for (k, r) in (1..l - 1).enumerate() {
        if k > 0 {
            let mut c = (k - 1) % 2;
            while c + 1 < w {
                at.swap(c, c + 1);
                c += 2;
            }
        }
        for c in 0..w {
            wires[at[c]].push((r, c + 1));
        }
    }
    let mut out = vec![top, bottom];
    out.extend(wires);
    out
}

/// Builds and verifies the `K_{L+1}` guiding pattern.
pub fn complete_embedding(side: usize) -> Result<GuidingPattern, BaselineError> {
    if side < 2 {
        return Err(BaselineError::SideTooSmall(side));
    }
    let king = KingGraph::new(side).expect("side >= 2");
    let chains: Vec<Vec<usize>> = raw_pattern(side)
        .into_iter()
        .map(|ch| ch.into_iter().map(|(r, c)| r * side + c).collect())
        .collect();
    let fail = |detail: String| BaselineError::InvalidPattern { side, detail };
    let verdict = verify_chains(&chains, &InputGraph::complete(side + 1), &king);
    if !verdict.is_minor_embedding {
        return Err(fail(format!("{:?}", verdict.violations)));
    }
    if chains.iter().any(|ch| ch.windows(2).any(|w| !king.is_adjacent(w[0], w[1]))) {
        return Err(fail("a chain is not a path".into()));
    }
    let mut guide = vec![u32::MAX; side * side];
    for (i, ch) in chains.iter().enumerate() {
        for &c in ch {
            guide[c] = i as u32;
        }
    }
    if guide.contains(&u32::MAX) {
        return Err(fail("pattern leaves cells uncovered".into()));
    }
    Ok(GuidingPattern { side, guide, chains })
}

/// Number of segments each baseline chain is cut into for `n` vertices.
///
/// Quotas `n * len_k / L^2` are rounded by largest remainder (ties to the
/// lower chain index) and then clamped to `[1, len_k]`.
pub fn segment_counts(lengths: &[usize], n: usize) -> Vec<usize> {
    let total: usize = lengths.iter().sum();
    assert!(n >= lengths.len() && n <= total, "segment count out of range");
    let mut q: Vec<usize> = lengths.iter().map(|&len| n * len / total).collect();
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(n * lengths[k] % total), k));
    let short = n - q.iter().sum::<usize>();
    for &k in order.iter().take(short) {
        q[k] += 1;
    }
    // Every chain needs a segment; take it from the chain with the most.
    while let Some(k) = (0..q.len()).find(|&k| q[k] == 0) {
        let donor = (0..q.len()).max_by_key(|&d| (q[d], std::cmp::Reverse(d))).unwrap();
        q[donor] -= 1;
        q[k] = 1;
    }
    // No chain can hold more segments than cells.
    while let Some(k) = (0..q.len()).find(|&k| q[k] > lengths[k]) {
        let spare = (0..q.len())
            .filter(|&d| q[d] < lengths[d])
            .max_by_key(|&d| (lengths[d] - q[d], std::cmp::Reverse(d)))
            .unwrap();
        q[k] -= 1;
        q[spare] += 1;
    }
    q
}

/// Cuts `path` into `parts` contiguous pieces whose lengths differ by at most one.
fn split_path(path: &[usize], parts: usize) -> Vec<Vec<usize>> {
    let (base, extra) = (path.len() / parts, path.len() % parts);
    let mut out = Vec::with_capacity(parts);
    let mut at = 0;
    for k in 0..parts {
        let len = base + usize::from(k < extra);
        out.push(path[at..at + len].to_vec());
        at += len;
    }
    out
}

/// Initial chains for an `n`-vertex graph, derived from the guiding pattern.
///
/// For `n <= L+1` the `n` longest baseline chains are used unchanged and the
/// rest of the grid stays free. Otherwise every baseline chain is cut as in
/// [`segment_counts`] and the segments go to vertices `0..n` in guide order.
pub fn initial_chains(n: usize, pattern: &GuidingPattern) -> Result<Vec<Vec<usize>>, BaselineError> {
    let cells = pattern.side * pattern.side;
    if n == 0 {
        return Err(BaselineError::EmptyGraph);
    }
    if n > cells {
        return Err(BaselineError::Capacity { n, cells });
    }
    let base = &pattern.chains;
    if n <= base.len() {
        let mut pick: Vec<usize> = (0..base.len()).collect();
        pick.sort_by_key(|&k| (std::cmp::Reverse(base[k].len()), k));
        pick.truncate(n);
        pick.sort_unstable();
        return Ok(pick.into_iter().map(|k| base[k].clone()).collect());
    }
    let lengths: Vec<usize> = base.iter().map(Vec::len).collect();
    let counts = segment_counts(&lengths, n);
    Ok(base
        .iter()
        .zip(counts)
        .flat_map(|(path, parts)| split_path(path, parts))
        .collect())
}

/// [`initial_chains`] as a scored placement of `graph`.
pub fn initial_placement(
    graph: &InputGraph,
    pattern: &GuidingPattern,
    king: &KingGraph,
) -> Result<Placement, BaselineError> {
    let chains = initial_chains(graph.vertex_count(), pattern)?;
    Ok(Placement::from_paths(graph, king, &chains)?)
}

/// No `K_N` with `N > 2L` is a minor of `KG_{L,L}`.
pub fn clique_upper_bound(side: usize) -> usize {
    2 * side
}

/// Width of [`tree_decomposition`], an upper bound on the treewidth.
pub fn treewidth_upper_bound(side: usize) -> usize {
    (2 * side).saturating_sub(1)
}

/// Lower bound on the hardware cells needed to host `K_N` when every cell has
/// degree at most `d`: `ceil(N(N-3)/(d-2))`.
pub fn min_hardware_vertices(n: usize, d: usize) -> Result<usize, BaselineError> {
    if n < 4 || d < 3 {
        return Err(BaselineError::BoundParameters { n, d });
    }
    Ok((n * (n - 3)).div_ceil(d - 2))
}

/// Lower bound on the size of each chain of a `K_N` minor: `ceil((N-3)/(d-2))`.
pub fn min_supervertex_size(n: usize, d: usize) -> Result<usize, BaselineError> {
    if n < 4 || d < 3 {
        return Err(BaselineError::BoundParameters { n, d });
    }
    Ok((n - 3).div_ceil(d - 2))
}

/// A tree decomposition with bags of cell indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Bags containing each cell.
    fn bags_of(&self, cells: usize) -> Vec<Vec<usize>> {
        let mut of = vec![Vec::new(); cells];
        for (b, bag) in self.bags.iter().enumerate() {
            for &c in bag {
                if c < cells {
                    of[c].push(b);
                }
            }
        }
        of
    }

    /// T1: every cell lies in some bag.
    pub fn check_cover(&self, king: &KingGraph) -> Result<(), String> {
        let of = self.bags_of(king.cell_count());
        match of.iter().position(Vec::is_empty) {
            Some(c) => Err(format!("cell {c} is in no bag")),
            None => Ok(()),
        }
    }

    /// T2: both ends of every hardware edge share a bag.
    pub fn check_edges(&self, king: &KingGraph) -> Result<(), String> {
        let of = self.bags_of(king.cell_count());
        for (a, b) in king.edges() {
            if !of[a].iter().any(|x| of[b].contains(x)) {
                return Err(format!("edge ({a}, {b}) is in no bag"));
            }
        }
        Ok(())
    }

    /// T3: the tree is a tree and the bags holding any cell form a subtree.
    pub fn check_running_intersection(&self, king: &KingGraph) -> Result<(), String> {
        let k = self.bags.len();
        if k == 0 || self.tree.len() != k - 1 {
            return Err("tree must have exactly one edge fewer than bags".into());
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in &self.tree {
            if a >= k || b >= k {
                return Err(format!("tree edge ({a}, {b}) refers to a missing bag"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let connected_within = |allowed: &dyn Fn(usize) -> bool, start: usize| {
            let mut seen = vec![false; k];
            seen[start] = true;
            let mut q = VecDeque::from([start]);
            let mut count = 1;
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] && allowed(y) {
                        seen[y] = true;
                        count += 1;
                        q.push_back(y);
                    }
                }
            }
            count
        };
        if connected_within(&|_| true, 0) != k {
            return Err("tree is not connected".into());
        }
        for (c, bags) in self.bags_of(king.cell_count()).iter().enumerate() {
            if bags.is_empty() {
                continue;
            }
            let mut member = vec![false; k];
            bags.iter().for_each(|&b| member[b] = true);
            if connected_within(&|b| member[b], bags[0]) != bags.len() {
                return Err(format!("bags holding cell {c} are not connected in the tree"));
            }
        }
        Ok(())
    }

    pub fn validate(&self, king: &KingGraph) -> Result<(), String> {
        self.check_cover(king)?;
        self.check_edges(king)?;
        self.check_running_intersection(king)
    }
}

/// Path decomposition of `KG_{L,L}` whose `k`-th bag holds grid columns `k`
/// and `k+1`. Its width `2L-1` bounds the treewidth.
pub fn tree_decomposition(side: usize) -> Result<TreeDecomposition, BaselineError> {
    if side < 2 {
        return Err(BaselineError::SideTooSmall(side));
    }
    let bags: Vec<Vec<usize>> = (0..side - 1)
        .map(|k| (0..side).flat_map(|r| [r * side + k, r * side + k + 1]).collect())
        .collect();
    let tree = (1..bags.len()).map(|k| (k - 1, k)).collect();
    let td = TreeDecomposition { bags, tree };
    let king = KingGraph::new(side).expect("side >= 2");
    td.validate(&king)
        .map_err(|detail| BaselineError::InvalidDecomposition { side, detail })?;
    Ok(td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pattern_small_cases() {
        let p = complete_embedding(2).unwrap();
        assert_eq!(p.chains().len(), 3);
        assert!(complete_embedding(1).is_err());
        assert!(complete_embedding(0).is_err());
        let p8 = complete_embedding(8).unwrap();
        assert_eq!(p8.chains().len(), 9);
        assert_eq!(p8.chains().iter().map(Vec::len).sum::<usize>(), 64);
    }

    #[test]
    fn pattern_valid_for_many_sides() {
        for side in 2..=64 {
            let p = complete_embedding(side).unwrap();
            let king = KingGraph::new(side).unwrap();
            let v = verify_chains(p.chains(), &InputGraph::complete(side + 1), &king);
            assert!(v.is_minor_embedding, "L={side}: {:?}", v.violations);
            assert_eq!(p.chains().iter().map(Vec::len).sum::<usize>(), side * side);
            for c in 0..side * side {
                assert!(p.chains()[p.guide(c)].contains(&c));
            }
        }
    }

    #[test]
    fn baseline_pattern_satisfies_vertex_bound() {
        for side in 3..=64 {
            // K_{L+1} needs at least ceil((L+1)(L-2)/6) cells; the pattern uses L^2.
            assert!(side * side >= min_hardware_vertices(side + 1, 8).unwrap());
            assert!(6 * side * side >= (side + 1) * (side - 2));
        }
    }

    #[test]
    fn initial_placement_at_clique_size_is_the_pattern() {
        let p = complete_embedding(6).unwrap();
        let chains = initial_chains(7, &p).unwrap();
        assert_eq!(chains, p.chains().to_vec());
    }

    #[test]
    fn small_n_takes_longest_chains() {
        let p = complete_embedding(8).unwrap();
        let lens: Vec<usize> = p.chains().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![11, 11, 6, 6, 6, 6, 6, 6, 6]);
        let chains = initial_chains(3, &p).unwrap();
        assert_eq!(chains, p.chains()[..3].to_vec());
    }

    #[test]
    fn double_clique_split_by_hand() {
        // L = 8, n = 18: quotas 18*11/64 = 3.09 for both frame chains and
        // 18*6/64 = 1.69 for the seven wires. Floors give 3+3+7 = 13; the five
        // spare segments go to the largest remainders, the first five wires.
        let p = complete_embedding(8).unwrap();
        let lens: Vec<usize> = p.chains().iter().map(Vec::len).collect();
        assert_eq!(segment_counts(&lens, 18), vec![3, 3, 2, 2, 2, 2, 2, 1, 1]);
        let chains = initial_chains(18, &p).unwrap();
        let seg: Vec<usize> = chains.iter().map(Vec::len).collect();
        assert_eq!(seg, vec![4, 4, 3, 4, 4, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 6, 6]);
    }

    #[test]
    fn saturating_n_gives_single_cells() {
        for side in 2..=9 {
            let p = complete_embedding(side).unwrap();
            let chains = initial_chains(side * side, &p).unwrap();
            assert!(chains.iter().all(|c| c.len() == 1));
            assert!(initial_chains(side * side + 1, &p).is_err());
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(clique_upper_bound(1), 2);
        assert_eq!(clique_upper_bound(2), 4);
        assert_eq!(clique_upper_bound(8), 16);
        assert_eq!(min_supervertex_size(9, 8).unwrap(), 1);
        assert_eq!(min_hardware_vertices(9, 8).unwrap(), 9);
        assert_eq!(min_supervertex_size(4, 3).unwrap(), 1);
        assert_eq!(min_hardware_vertices(4, 3).unwrap(), 4);
        assert_eq!(min_hardware_vertices(10, 5).unwrap(), 24);
        assert!(min_hardware_vertices(9, 2).is_err());
        assert!(min_supervertex_size(9, 1).is_err());
    }

    #[test]
    fn k4_fits_the_2x2_grid() {
        let king = KingGraph::new(2).unwrap();
        let chains = vec![vec![0], vec![1], vec![2], vec![3]];
        assert!(verify_chains(&chains, &InputGraph::complete(4), &king).is_minor_embedding);
        assert_eq!(clique_upper_bound(2), 4);
    }

    #[test]
    fn decomposition_examples() {
        let t5 = tree_decomposition(5).unwrap();
        assert_eq!(t5.bags.len(), 4);
        assert!(t5.bags.iter().all(|b| b.len() == 10));
        assert_eq!(t5.width(), 9);
        let t2 = tree_decomposition(2).unwrap();
        assert_eq!(t2.bags.len(), 1);
        let mut b = t2.bags[0].clone();
        b.sort_unstable();
        assert_eq!(b, vec![0, 1, 2, 3]);
        assert_eq!(t2.width(), 3);
    }

    #[test]
    fn decomposition_validators_catch_breakage() {
        let king = KingGraph::new(4).unwrap();
        let good = tree_decomposition(4).unwrap();
        let mut no_cover = good.clone();
        no_cover.bags[0].retain(|&c| c != 0);
        assert!(no_cover.check_cover(&king).is_err());
        let mut no_edge = good.clone();
        // Dropping column 1 from the first bag loses the edges between columns 0 and 1.
        no_edge.bags[0].retain(|&c| c % 4 == 0);
        assert!(no_edge.check_edges(&king).is_err());
        let mut broken = good.clone();
        broken.bags[1].retain(|&c| c != 6);
        broken.bags[1].push(0);
        // Cell 0 now sits in bags 0 and 1 but cell 6 only in bag 2: still fine;
        // put cell 0 into bag 2 and drop it from bag 1 to split its subtree.
        broken.bags[1].retain(|&c| c != 0);
        broken.bags[2].push(0);
        assert!(broken.check_running_intersection(&king).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn decomposition_width(side in 2usize..=100) {
            let t = tree_decomposition(side).unwrap();
            prop_assert_eq!(t.width(), 2 * side - 1);
            prop_assert_eq!(t.width(), treewidth_upper_bound(side));
        }

        #[test]
        fn initial_chains_cover_and_partition(side in 2usize..14, frac in 0.0f64..1.0) {
            let p = complete_embedding(side).unwrap();
            let n = 1 + ((side * side - 1) as f64 * frac) as usize;
            let chains = initial_chains(n, &p).unwrap();
            prop_assert_eq!(chains.len(), n);
            let king = KingGraph::new(side).unwrap();
            let v = verify_chains(&chains, &InputGraph::empty(n), &king);
            prop_assert!(v.is_super_vertex_placement);
            let used: usize = chains.iter().map(Vec::len).sum();
            if n > side + 1 {
                prop_assert_eq!(used, side * side);
            }
            for ch in &chains {
                prop_assert!(ch.windows(2).all(|w| king.is_adjacent(w[0], w[1])));
            }
        }
    }
}
