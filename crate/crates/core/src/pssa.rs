//! Simulated annealing over super-vertex placements.
//!
//! Each iteration proposes either a *shift* (a leaf cell changes chains) or
//! a *swap* (two chains exchange their cells), evaluates the change of
//! `E_emb` incrementally and accepts it when `exp(dE / T) > r`. The best
//! placement is tracked and returned; the run stops early once every input
//! edge is represented.

use crate::baseline::{complete_embedding, initial_placement, BaselineError, GuidingPattern};
use crate::graphs::InputGraph;
use crate::hardware::KingGraph;
use crate::placement::{Placement, Shift, FREE};
use crate::rng::{self, Rng};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Temperature schedule families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleFamily {
    /// Two linear phases, each cooling to zero.
    S1,
    /// The first linear phase only.
    S2,
    /// Two exponential phases.
    S3,
    /// The first exponential phase only.
    S4,
}

impl ScheduleFamily {
    pub fn is_exponential(self) -> bool {
        matches!(self, ScheduleFamily::S3 | ScheduleFamily::S4)
    }

    pub fn is_single_phase(self) -> bool {
        matches!(self, ScheduleFamily::S2 | ScheduleFamily::S4)
    }
}

impl fmt::Display for ScheduleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleFamily::S1 => "s1",
            ScheduleFamily::S2 => "s2",
            ScheduleFamily::S3 => "s3",
            ScheduleFamily::S4 => "s4",
        })
    }
}

impl FromStr for ScheduleFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(ScheduleFamily::S1),
            "s2" => Ok(ScheduleFamily::S2),
            "s3" => Ok(ScheduleFamily::S3),
            "s4" => Ok(ScheduleFamily::S4),
            _ => Err(format!("unknown schedule '{s}', expected s1, s2, s3 or s4")),
        }
    }
}

pub const DEFAULT_T_MAX: u64 = 70_000_000;
pub const DEFAULT_T0: f64 = 60.315;
pub const DEFAULT_T_HALF: f64 = 33.435;
pub const DEFAULT_BETA: f64 = 0.9999;
/// Iterations between two exponential cooling steps.
pub const COOLING_INTERVAL: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleConfig {
    /// Total iterations. Zero means: score the initial placement only.
    pub t_max: u64,
    pub family: ScheduleFamily,
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "T_half")]
    pub t_half: f64,
    pub beta: f64,
    pub ps_start: f64,
    pub ps_end: f64,
    pub pa_start: f64,
    pub pa_end: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            t_max: DEFAULT_T_MAX,
            family: ScheduleFamily::S3,
            t0: DEFAULT_T0,
            t_half: DEFAULT_T_HALF,
            beta: DEFAULT_BETA,
            ps_start: 1.0,
            ps_end: 0.0,
            pa_start: 0.095,
            pa_end: 0.487,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PssaError {
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("{n} input vertices exceed the {cells} hardware cells")]
    Capacity { n: usize, cells: usize },
    #[error("{m} input edges exceed the {hw} hardware edges")]
    TooManyEdges { m: usize, hw: usize },
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

impl ScheduleConfig {
    pub fn validate(&self) -> Result<(), PssaError> {
        let bad = |m: String| Err(PssaError::Schedule(m));
        if self.t_max == 1 {
            return bad("t_max must be 0 or at least 2".into());
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("beta must lie in (0, 1), got {}", self.beta));
        }
        if !(self.t0 >= 0.0 && self.t_half >= 0.0 && self.t0.is_finite() && self.t_half.is_finite()) {
            return bad("temperatures must be finite and non-negative".into());
        }
        for (name, p) in [
            ("ps_start", self.ps_start),
            ("ps_end", self.ps_end),
            ("pa_start", self.pa_start),
            ("pa_end", self.pa_end),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        Ok(())
    }

    /// Iterations actually run: `t_max`, or `t_max / 2` for single-phase families.
    pub fn iterations(&self) -> u64 {
        if self.family.is_single_phase() {
            self.t_max / 2
        } else {
            self.t_max
        }
    }

    /// `T(t)`; `None` outside the schedule (after `t_max / 2` for single-phase families).
    pub fn temperature(&self, t: u64) -> Option<f64> {
        let half = self.t_max / 2;
        if t > self.t_max || (self.family.is_single_phase() && t >= half) {
            return None;
        }
        let tm = self.t_max as f64;
        let x = t as f64;
        Some(match (self.family.is_exponential(), t < half) {
            (false, true) => self.t0 * (1.0 - 2.0 * x / tm),
            (false, false) => self.t_half * (2.0 - 2.0 * x / tm),
            (true, true) => self.t0 * self.beta.powi((t / COOLING_INTERVAL) as i32),
            (true, false) => self.t_half * self.beta.powi(((t - half) / COOLING_INTERVAL) as i32),
        })
    }

    /// `(p_s(t), p_a(t))`, both linear over `[0, t_max]`.
    pub fn move_probabilities(&self, t: u64) -> (f64, f64) {
        let f = if self.t_max == 0 { 0.0 } else { t as f64 / self.t_max as f64 };
        (
            self.ps_start + (self.ps_end - self.ps_start) * f,
            self.pa_start + (self.pa_end - self.pa_start) * f,
        )
    }

    /// Rescales `beta` so that a run of `t_max` iterations cools by the same
    /// total factor as a run of `reference_t_max` iterations with the
    /// current `beta`: `beta' = beta^(reference_t_max / t_max)`.
    pub fn with_cooling_matched_to(mut self, reference_t_max: u64) -> Self {
        if self.t_max > 0 {
            self.beta = self.beta.powf(reference_t_max as f64 / self.t_max as f64);
        }
        self
    }

    /// Adapts a schedule tuned for `reference_t_max` iterations to the
    /// current `t_max`: both start temperatures are multiplied by
    /// `t_max / reference_t_max` and `beta` is matched as in
    /// [`with_cooling_matched_to`](Self::with_cooling_matched_to). A linear
    /// phase then spends the same number of iterations below any fixed
    /// temperature as the reference run does.
    pub fn scaled_to_reference(self, reference_t_max: u64) -> Self {
        if self.t_max == 0 || reference_t_max == 0 {
            return self;
        }
        let f = self.t_max as f64 / reference_t_max as f64;
        let mut c = self.with_cooling_matched_to(reference_t_max);
        c.t0 *= f;
        c.t_half *= f;
        c
    }
}

/// Metropolis-style acceptance: `exp(dE / T) > r` with `r` uniform in `[0, 1)`.
///
/// Non-negative changes are always accepted; at `T = 0` every negative
/// change is rejected. No random number is drawn in either case.
#[inline]
pub fn accept(delta: i64, temperature: f64, rng: &mut Rng) -> bool {
    if delta >= 0 {
        return true;
    }
    if temperature <= 0.0 {
        return false;
    }
    (delta as f64 / temperature).exp() > rng.random::<f64>()
}

/// Swap proposal: a uniform input edge `(i, k)` with uniform orientation, a
/// uniform cell `w` of `phi(k)` and a uniform hardware neighbour `w'` of `w`.
/// Returns `(i, label(w'))` unless that label is free, `i` or `k`.
pub fn propose_swap(p: &Placement, graph: &InputGraph, king: &KingGraph, rng: &mut Rng) -> Option<(usize, usize)> {
    let m = graph.edge_count();
    if m == 0 {
        return None;
    }
    let (a, b) = graph.edge(rng.random_range(0..m));
    let (i, k) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
    let cells = p.chain_cells(k);
    let w = cells[rng.random_range(0..cells.len())] as usize;
    let nb = king.neighbors(w);
    if nb.is_empty() {
        return None;
    }
    let j = p.labels()[nb[rng.random_range(0..nb.len())] as usize];
    if j == FREE || j as usize == i || j as usize == k {
        return None;
    }
    Some((i, j as usize))
}

/// Shift proposal.
///
/// A uniform chain `i` with at least two cells, one of its two leaves `u`
/// and an away flag with probability `p_away` are drawn. Candidates are
/// leaves `v` of other chains next to `u`; without the away flag they must
/// share `u`'s guide label. A uniform candidate gives the move `u: i -> j`.
/// With `degree_weighted`, the direction is kept with probability
/// `r_i / (r_i + r_j)` where `r_x = |phi(x)| / deg(x)`, and otherwise
/// reversed to `v: j -> i` (skipped if `phi(j)` has a single cell).
pub fn propose_shift(
    p: &Placement,
    graph: &InputGraph,
    king: &KingGraph,
    pattern: &GuidingPattern,
    rng: &mut Rng,
    p_away: f64,
    degree_weighted: bool,
) -> Option<Shift> {
    let multi = p.multi_cell_chains();
    if multi.is_empty() {
        return None;
    }
    let i = multi[rng.random_range(0..multi.len())] as usize;
    let (h, t) = p.leaves(i)?;
    let u = if rng.random_bool(0.5) { h } else { t };
    let away = rng.random::<f64>() < p_away;
    let gu = pattern.guide(u);
    let mut cand = [0u32; 8];
    let mut nc = 0;
    let labels = p.labels();
    for &v in king.neighbors(u) {
        let l = labels[v as usize];
        if l != FREE && l as usize != i && p.is_leaf(v as usize) && (away || pattern.guide(v as usize) == gu) {
            cand[nc] = v;
            nc += 1;
        }
    }
    if nc == 0 {
        return None;
    }
    let v = cand[rng.random_range(0..nc)] as usize;
    let j = labels[v] as usize;
    if degree_weighted {
        // mu = r_i / (r_i + r_j) = |phi(i)| deg(j) / (|phi(i)| deg(j) + |phi(j)| deg(i)).
        let (si, sj) = (p.chain_len(i) as u64, p.chain_len(j) as u64);
        let (di, dj) = (graph.degree(i) as u64, graph.degree(j) as u64);
        let num = si * dj;
        let den = num + sj * di;
        let forward = if den == 0 { rng.random_bool(0.5) } else { rng.random_range(0..den) < num };
        if !forward {
            if sj == 1 {
                return None;
            }
            return Some(Shift { cell: v, from: j, to: i, attach: u });
        }
    }
    Some(Shift { cell: u, from: i, to: j, attach: v })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PssaOptions {
    pub degree_weighted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub embedded_edges: usize,
    pub total_edges: usize,
    pub initial_embedded_edges: usize,
    /// Loop passes made, including skipped proposals.
    pub iterations: u64,
    pub accepted: u64,
    pub skipped: u64,
    pub found: bool,
}

/// Annealing state of one run.
#[derive(Clone, Debug)]
pub struct AnnealState {
    pub current: Placement,
    pub best: Placement,
    pub t: u64,
    pub rng: Rng,
}

/// Runs the annealer from the initial placement derived from the guiding pattern.
pub fn run_pssa(
    graph: &InputGraph,
    king: &KingGraph,
    config: &ScheduleConfig,
    seed: u64,
    options: PssaOptions,
) -> Result<(Placement, RunReport), PssaError> {
    let pattern = if king.side() >= 2 { Some(complete_embedding(king.side())?) } else { None };
    match pattern {
        Some(p) => run_pssa_with_pattern(graph, king, &p, config, seed, options),
        None => single_cell_run(graph, king),
    }
}

/// A 1x1 grid hosts at most one vertex; nothing to anneal.
fn single_cell_run(graph: &InputGraph, king: &KingGraph) -> Result<(Placement, RunReport), PssaError> {
    let n = graph.vertex_count();
    if n != 1 {
        return Err(PssaError::Capacity { n, cells: 1 });
    }
    let p = Placement::from_paths(graph, king, &[vec![0]]).expect("one cell, one vertex");
    Ok((p, RunReport { found: true, ..RunReport::default() }))
}

pub fn run_pssa_with_pattern(
    graph: &InputGraph,
    king: &KingGraph,
    pattern: &GuidingPattern,
    config: &ScheduleConfig,
    seed: u64,
    options: PssaOptions,
) -> Result<(Placement, RunReport), PssaError> {
    config.validate()?;
    let (n, cells) = (graph.vertex_count(), king.cell_count());
    if n > cells {
        return Err(PssaError::Capacity { n, cells });
    }
    if graph.edge_count() > king.edge_count() {
        return Err(PssaError::TooManyEdges { m: graph.edge_count(), hw: king.edge_count() });
    }
    let current = initial_placement(graph, pattern, king)?;
    let total = graph.edge_count();
    let mut report = RunReport {
        embedded_edges: current.embedded_edges(),
        total_edges: total,
        initial_embedded_edges: current.embedded_edges(),
        ..RunReport::default()
    };
    if current.embedded_edges() == total {
        report.found = true;
        return Ok((current, report));
    }
    let mut state = AnnealState { best: current.clone(), current, t: 0, rng: rng::from_seed(seed) };
    anneal(&mut state, graph, king, pattern, config, options, &mut report);
    report.embedded_edges = state.best.embedded_edges();
    report.found = report.embedded_edges == total;
    Ok((state.best, report))
}

fn anneal(
    s: &mut AnnealState,
    graph: &InputGraph,
    king: &KingGraph,
    pattern: &GuidingPattern,
    config: &ScheduleConfig,
    options: PssaOptions,
    report: &mut RunReport,
) {
    let total = graph.edge_count();
    let iters = config.iterations();
    let half = config.t_max / 2;
    let mut temp = 0.0;
    while s.t < iters {
        let t = s.t;
        s.t += 1;
        let phase_t = if t < half { t } else { t - half };
        if !config.family.is_exponential() || phase_t % COOLING_INTERVAL == 0 {
            temp = config.temperature(t).expect("t is inside the schedule");
        }
        let (p_shift, p_away) = config.move_probabilities(t);
        let delta = if s.rng.random::<f64>() < p_shift {
            match propose_shift(&s.current, graph, king, pattern, &mut s.rng, p_away, options.degree_weighted) {
                Some(m) => s.current.evaluate_shift(graph, king, m),
                None => {
                    report.skipped += 1;
                    continue;
                }
            }
        } else {
            match propose_swap(&s.current, graph, king, &mut s.rng) {
                Some((i, j)) => s.current.evaluate_swap(graph, king, i, j),
                None => {
                    report.skipped += 1;
                    continue;
                }
            }
        };
        if accept(delta, temp, &mut s.rng) {
            s.current.commit();
            report.accepted += 1;
            if s.current.embedded_edges() > s.best.embedded_edges() {
                s.best.clone_from(&s.current);
                if s.best.embedded_edges() == total {
                    break;
                }
            }
        } else {
            s.current.discard();
        }
        if cfg!(debug_assertions) && t % 10_000 == 0 {
            debug_assert_eq!(s.current.embedded_edges(), s.current.count_embedded_edges(graph, king));
        }
    }
    report.iterations = s.t;
}
