//! Minor embedding of sparse input graphs into King's-graph hardware.
//!
//! The crate is organised bottom-up:
//!
//! * [`hardware`]: the `L x L` King's graph and its fixed neighbour order.
//! * [`graphs`]: simple undirected input graphs, random generators and file I/O.
//! * [`placement`]: super-vertex placements, the verifier, incremental scoring
//!   and Ising parameter compilation.
//! * [`baseline`]: the complete-graph guiding pattern, initial placements,
//!   the tree decomposition and the vertex-count bounds.
//! * [`pssa`]: the annealing engine.
//! * [`terminal`]: free-cell cleanup and BFS linking after annealing.
//! * [`pipeline`]: annealing plus optional terminal search, verified.
//! * [`bench`]: embedding probabilities and threshold sweeps.

pub mod baseline;
pub mod bench;
pub mod graphs;
pub mod hardware;
pub mod pipeline;
pub mod placement;
pub mod pssa;
pub mod rng;
pub mod terminal;

pub use graphs::InputGraph;
pub use hardware::KingGraph;
pub use placement::Placement;
