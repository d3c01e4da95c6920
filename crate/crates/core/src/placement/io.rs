//! JSON placement files.
//!
//! ```text
//! {
//!   "L": 3,
//!   "n": 2,
//!   "path_order": true,
//!   "chains": [
//!     [[0,0],[0,1]],
//!     [[2,2]]
//!   ]
//! }
//! ```
//!
//! Cells are `[row, col]`. The writer always emits exactly this layout, one
//! chain per line, so equal placements give byte-identical files.

use super::Placement;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementFile {
    #[serde(rename = "L")]
    pub side: usize,
    pub n: usize,
    /// Whether each chain is listed in path order.
    #[serde(default)]
    pub path_order: bool,
    pub chains: Vec<Vec<[usize; 2]>>,
}

#[derive(Debug, thiserror::Error)]
pub enum PlacementFileError {
    #[error("malformed placement file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("placement file declares n = {declared} but lists {found} chains")]
    ChainCount { declared: usize, found: usize },
    #[error("cell [{row}, {col}] lies outside the {side}x{side} grid")]
    OutOfGrid { row: usize, col: usize, side: usize },
}

impl PlacementFile {
    pub fn from_placement(p: &Placement) -> Self {
        let side = p.side();
        PlacementFile {
            side,
            n: p.vertex_count(),
            path_order: p.is_path_form(),
            chains: p
                .chains()
                .into_iter()
                .map(|ch| ch.into_iter().map(|c| [c / side, c % side]).collect())
                .collect(),
        }
    }

    /// Chains as row-major cell indices, checking shape and grid bounds.
    pub fn cell_chains(&self) -> Result<Vec<Vec<usize>>, PlacementFileError> {
        if self.chains.len() != self.n {
            return Err(PlacementFileError::ChainCount { declared: self.n, found: self.chains.len() });
        }
        self.chains
            .iter()
            .map(|ch| {
                ch.iter()
                    .map(|&[row, col]| {
                        if row >= self.side || col >= self.side {
                            Err(PlacementFileError::OutOfGrid { row, col, side: self.side })
                        } else {
                            Ok(row * self.side + col)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn format_placement(file: &PlacementFile) -> String {
    let mut s = String::new();
    writeln!(s, "{{").unwrap();
    writeln!(s, "  \"L\": {},", file.side).unwrap();
    writeln!(s, "  \"n\": {},", file.n).unwrap();
    writeln!(s, "  \"path_order\": {},", file.path_order).unwrap();
    write!(s, "  \"chains\": [").unwrap();
    for (k, ch) in file.chains.iter().enumerate() {
        s.push_str(if k == 0 { "\n    [" } else { ",\n    [" });
        for (q, [r, c]) in ch.iter().enumerate() {
            if q > 0 {
                s.push(',');
            }
            write!(s, "[{r},{c}]").unwrap();
        }
        s.push(']');
    }
    if !file.chains.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

pub fn parse_placement(text: &str) -> Result<PlacementFile, PlacementFileError> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_placement(p: &Placement, path: impl AsRef<Path>) -> Result<(), PlacementFileError> {
    std::fs::write(path, format_placement(&PlacementFile::from_placement(p)))?;
    Ok(())
}

pub fn read_placement(path: impl AsRef<Path>) -> Result<PlacementFile, PlacementFileError> {
    parse_placement(&std::fs::read_to_string(path)?)
}
