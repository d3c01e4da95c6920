//! The King's graph `KG_{L,L}`.
//!
//! Cells are addressed row-major: `index = row * L + col`. Two distinct cells
//! are adjacent iff their Chebyshev distance is 1. Neighbour lists follow the
//! clockwise order N, NE, E, SE, S, SW, W, NW with off-grid positions omitted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Marker for an off-grid position in [`KingGraph::ring`].
pub const NO_CELL: u32 = u32::MAX;

/// A grid coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

/// The eight king directions in neighbour-list order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    /// `(d_row, d_col)`; rows grow downwards.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::N => (-1, 0),
            Direction::NE => (-1, 1),
            Direction::E => (0, 1),
            Direction::SE => (1, 1),
            Direction::S => (1, 0),
            Direction::SW => (1, -1),
            Direction::W => (0, -1),
            Direction::NW => (-1, -1),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HardwareError {
    #[error("side length must be at least 1")]
    EmptyGrid,
    #[error("cell ({row}, {col}) is outside the {side}x{side} grid")]
    OutOfGrid { row: usize, col: usize, side: usize },
}

/// An `L x L` King's graph with precomputed neighbour tables.
#[derive(Clone, Debug)]
pub struct KingGraph {
    side: usize,
    /// Per cell, the neighbour in each of the 8 directions or [`NO_CELL`].
    ring: Vec<[u32; 8]>,
    /// Flattened in-grid neighbour lists.
    nbrs: Vec<u32>,
    offsets: Vec<u32>,
}

impl KingGraph {
    pub fn new(side: usize) -> Result<Self, HardwareError> {
        if side == 0 {
            return Err(HardwareError::EmptyGrid);
        }
        let n = side * side;
        let mut ring = vec![[NO_CELL; 8]; n];
        let mut nbrs = Vec::with_capacity(8 * n);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for r in 0..side {
            for c in 0..side {
                let idx = r * side + c;
                for (k, d) in Direction::ALL.iter().enumerate() {
                    let (dr, dc) = d.offset();
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr >= 0 && nc >= 0 && (nr as usize) < side && (nc as usize) < side {
                        let nb = (nr as usize * side + nc as usize) as u32;
                        ring[idx][k] = nb;
                        nbrs.push(nb);
                    }
                }
                offsets.push(nbrs.len() as u32);
            }
        }
        Ok(KingGraph { side, ring, nbrs, offsets })
    }

    /// Side length `L`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// `|V(H)| = L^2`.
    pub fn cell_count(&self) -> usize {
        self.side * self.side
    }

    /// `|E(H)|`, by the closed form.
    pub fn edge_count(&self) -> usize {
        edge_count(self.side)
    }

    pub fn index(&self, cell: Cell) -> Result<usize, HardwareError> {
        if cell.row >= self.side || cell.col >= self.side {
            return Err(HardwareError::OutOfGrid { row: cell.row, col: cell.col, side: self.side });
        }
        Ok(cell.row * self.side + cell.col)
    }

    /// Coordinates of a cell index. Panics if `idx` is out of range.
    pub fn cell(&self, idx: usize) -> Cell {
        assert!(idx < self.cell_count(), "cell index {idx} out of range");
        Cell { row: idx / self.side, col: idx % self.side }
    }

    /// In-grid neighbours of `idx` in the fixed clockwise order.
    #[inline]
    pub fn neighbors(&self, idx: usize) -> &[u32] {
        &self.nbrs[self.offsets[idx] as usize..self.offsets[idx + 1] as usize]
    }

    #[inline]
    pub fn degree(&self, idx: usize) -> usize {
        (self.offsets[idx + 1] - self.offsets[idx]) as usize
    }

    /// The 8 ring positions around `idx`, [`NO_CELL`] where off-grid.
    #[inline]
    pub fn ring(&self, idx: usize) -> &[u32; 8] {
        &self.ring[idx]
    }

    /// Neighbours of a coordinate with their directions.
    pub fn neighbors_of(&self, cell: Cell) -> Result<Vec<(Direction, Cell)>, HardwareError> {
        let idx = self.index(cell)?;
        Ok(Direction::ALL
            .iter()
            .zip(self.ring[idx].iter())
            .filter(|(_, &nb)| nb != NO_CELL)
            .map(|(&d, &nb)| (d, self.cell(nb as usize)))
            .collect())
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        let (ca, cb) = (self.cell(a), self.cell(b));
        a != b && ca.row.abs_diff(cb.row) <= 1 && ca.col.abs_diff(cb.col) <= 1
    }

    /// All hardware edges `(a, b)` with `a < b`, ordered by `a` then neighbour order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.cell_count()).flat_map(move |a| {
            self.neighbors(a)
                .iter()
                .filter(move |&&b| (b as usize) > a)
                .map(move |&b| (a, b as usize))
        })
    }
}

/// `|E(KG_{L,L})| = 2(L-1)(2L-1)`; zero for `L <= 1`.
pub fn edge_count(side: usize) -> usize {
    if side == 0 {
        return 0;
    }
    2 * (side - 1) * (2 * side - 1)
}
