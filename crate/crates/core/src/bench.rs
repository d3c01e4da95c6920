//! Embedding probabilities and embedding thresholds over random graph classes.
//!
//! Sample `k` of the point `(class, L, n)` under master seed `S` uses
//! `s = derive_seed(S, [class tag, L, n, k])`; the graph is generated from
//! `derive_seed(s, [0])` and the pipeline is seeded with `derive_seed(s, [1])`.
//! Class tags are cubic 1, ba 2, er 3, complete 4. When connected cubic
//! graphs are required, rejected attempts `a = 1, 2, ...` regenerate from
//! `derive_seed(s, [0, a])`.

use crate::graphs::{gen_barabasi_albert, gen_erdos_renyi_connected, gen_random_cubic, GraphError, InputGraph};
use crate::hardware::KingGraph;
use crate::pipeline::{embed, EmbedConfig};
use crate::pssa::PssaError;
use crate::rng::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GraphClass {
    Cubic,
    Ba { m0: usize, m: usize },
    Er { rho: f64 },
    /// Complete graphs; deterministic, useful as a degenerate class.
    Complete,
}

impl GraphClass {
    pub const BA_DEFAULT: GraphClass = GraphClass::Ba { m0: 2, m: 2 };
    pub const ER_DEFAULT: GraphClass = GraphClass::Er { rho: 0.2 };

    pub fn name(&self) -> &'static str {
        match self {
            GraphClass::Cubic => "cubic",
            GraphClass::Ba { .. } => "ba",
            GraphClass::Er { .. } => "er",
            GraphClass::Complete => "complete",
        }
    }

    fn tag(&self) -> u64 {
        match self {
            GraphClass::Cubic => 1,
            GraphClass::Ba { .. } => 2,
            GraphClass::Er { .. } => 3,
            GraphClass::Complete => 4,
        }
    }

    /// Smallest valid size `>= n` for the class: cubic sizes are even and
    /// at least 4, BA sizes are at least `m0`, ER sizes at least 2.
    pub fn normalize(&self, n: usize) -> usize {
        match *self {
            GraphClass::Cubic => (n.max(4) + 1) & !1,
            GraphClass::Ba { m0, .. } => n.max(m0),
            GraphClass::Er { .. } => n.max(2),
            GraphClass::Complete => n.max(1),
        }
    }

    pub fn generate(&self, n: usize, seed: u64) -> Result<InputGraph, GraphError> {
        match *self {
            GraphClass::Cubic => gen_random_cubic(n, seed),
            GraphClass::Ba { m0, m } => gen_barabasi_albert(n, m0, m, seed),
            GraphClass::Er { rho } => gen_erdos_renyi_connected(n, rho, seed),
            GraphClass::Complete => Ok(InputGraph::complete(n)),
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphClass {
    type Err = String;
    /// Parses a class name; BA and ER get their default parameters.
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cubic" => Ok(GraphClass::Cubic),
            "ba" => Ok(GraphClass::BA_DEFAULT),
            "er" => Ok(GraphClass::ER_DEFAULT),
            "complete" => Ok(GraphClass::Complete),
            _ => Err(format!("unknown graph class '{s}', expected cubic, ba, er or complete")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub embed: EmbedConfig,
    pub samples: usize,
    /// Minimum number of successes for a point to pass.
    pub success: usize,
    /// Size increment between tested points.
    pub step: usize,
    /// With `step` larger than the class granularity, bisect between the
    /// last passing and the first failing size.
    pub refine: bool,
    /// Redraw disconnected cubic graphs.
    pub require_connected: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            embed: EmbedConfig::default(),
            samples: 20,
            success: 19,
            step: 1,
            refine: true,
            require_connected: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid bench settings: {0}")]
    Config(String),
    #[error("{class} graph with n = {n}, sample {sample}: {source}")]
    Generate { class: String, n: usize, sample: usize, source: GraphError },
    #[error("no connected {class} graph with n = {n} after {attempts} attempts")]
    Disconnected { class: String, n: usize, attempts: usize },
    #[error(transparent)]
    Pipeline(#[from] PssaError),
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.samples == 0 {
            return Err(BenchError::Config("samples must be at least 1".into()));
        }
        if self.success > self.samples {
            return Err(BenchError::Config(format!(
                "success cut {} exceeds the sample count {}",
                self.success, self.samples
            )));
        }
        if self.step == 0 {
            return Err(BenchError::Config("step must be at least 1".into()));
        }
        self.embed.effective_schedule().validate()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub class: String,
    #[serde(rename = "L")]
    pub side: usize,
    pub n: usize,
    pub samples: usize,
    pub successes: usize,
    pub p_emb: f64,
}

const CONNECT_ATTEMPTS: usize = 1000;

fn sample_graph(class: GraphClass, n: usize, seed: u64, k: usize, cfg: &BenchConfig) -> Result<InputGraph, BenchError> {
    let wrap = |source| BenchError::Generate { class: class.to_string(), n, sample: k, source };
    let g = class.generate(n, derive_seed(seed, &[0])).map_err(wrap)?;
    if !cfg.require_connected || g.is_connected() {
        return Ok(g);
    }
    for a in 1..CONNECT_ATTEMPTS as u64 {
        let g = class.generate(n, derive_seed(seed, &[0, a])).map_err(wrap)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(BenchError::Disconnected { class: class.to_string(), n, attempts: CONNECT_ATTEMPTS })
}

/// Runs one sample; inputs that cannot fit the hardware count as failures.
fn run_sample(class: GraphClass, n: usize, king: &KingGraph, cfg: &BenchConfig, master: u64, k: usize) -> Result<bool, BenchError> {
    let s = derive_seed(master, &[class.tag(), king.side() as u64, n as u64, k as u64]);
    let g = sample_graph(class, n, s, k, cfg)?;
    if n > king.cell_count() || g.edge_count() > king.edge_count() {
        return Ok(false);
    }
    let (_, report) = embed(&g, king, &cfg.embed, derive_seed(s, &[1]))?;
    Ok(report.found)
}

/// Fraction of `cfg.samples` random graphs of size `n` that the pipeline
/// embeds into `KG_{L,L}`. Samples run in parallel; the result does not
/// depend on scheduling.
pub fn embedding_probability(
    class: GraphClass,
    n: usize,
    side: usize,
    cfg: &BenchConfig,
    seed: u64,
) -> Result<PointResult, BenchError> {
    cfg.validate()?;
    let king = KingGraph::new(side).map_err(|e| BenchError::Config(e.to_string()))?;
    let outcomes: Vec<Result<bool, BenchError>> =
        (0..cfg.samples).into_par_iter().map(|k| run_sample(class, n, &king, cfg, seed, k)).collect();
    let mut successes = 0;
    for o in outcomes {
        successes += o? as usize;
    }
    Ok(PointResult {
        class: class.to_string(),
        side,
        n,
        samples: cfg.samples,
        successes,
        p_emb: successes as f64 / cfg.samples as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub class: String,
    #[serde(rename = "L")]
    pub side: usize,
    /// First size whose point failed the success cut.
    pub threshold: usize,
    /// Every evaluated point in evaluation order.
    pub points: Vec<PointResult>,
}

impl ThresholdResult {
    pub fn ratio(&self) -> f64 {
        self.threshold as f64 / self.side as f64
    }
}

/// Increases `n` from `L` until a point fails the success cut.
pub fn embedding_threshold(class: GraphClass, side: usize, cfg: &BenchConfig, seed: u64) -> Result<ThresholdResult, BenchError> {
    cfg.validate()?;
    let mut points = Vec::new();
    let eval = |n: usize, points: &mut Vec<PointResult>| -> Result<bool, BenchError> {
        let p = embedding_probability(class, n, side, cfg, seed)?;
        let pass = p.successes >= cfg.success;
        points.push(p);
        Ok(pass)
    };
    let mut last_pass = None;
    let mut n = class.normalize(side);
    while eval(n, &mut points)? {
        last_pass = Some(n);
        n = class.normalize(n + cfg.step);
    }
    let mut fail = n;
    if cfg.refine {
        if let Some(mut lo) = last_pass {
            loop {
                let mid = class.normalize(lo + (fail - lo) / 2);
                if mid <= lo || mid >= fail {
                    break;
                }
                if eval(mid, &mut points)? {
                    lo = mid;
                } else {
                    fail = mid;
                }
            }
        }
    }
    Ok(ThresholdResult { class: class.to_string(), side, threshold: fail, points })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub class: String,
    #[serde(rename = "L")]
    pub side: usize,
    pub result: Result<ThresholdResult, String>,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

/// Threshold per side length. A failing side is recorded and the sweep
/// continues.
pub fn threshold_sweep(class: GraphClass, sides: &[usize], cfg: &BenchConfig, seed: u64) -> BenchReport {
    let rows = sides
        .iter()
        .map(|&side| {
            let start = Instant::now();
            let result = embedding_threshold(class, side, cfg, seed).map_err(|e| e.to_string());
            SweepRow { class: class.to_string(), side, result, wall_seconds: start.elapsed().as_secs_f64() }
        })
        .collect();
    BenchReport { config: cfg.clone(), seed, rows }
}

pub const THRESHOLD_CSV_HEADER: &str = "class,L,n_threshold,c,note";
pub const POINTS_CSV_HEADER: &str = "class,L,n,samples,successes,p_emb";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BenchReport {
    /// One row per side. With `timing`, a trailing `wall_s` column is added;
    /// without it the output is fully determined by the seed.
    pub fn threshold_csv(&self, timing: bool) -> String {
        let mut out = String::from(THRESHOLD_CSV_HEADER);
        if timing {
            out.push_str(",wall_s");
        }
        out.push('\n');
        for r in &self.rows {
            match &r.result {
                Ok(t) => write!(out, "{},{},{},{:.4},", r.class, r.side, t.threshold, t.ratio()).unwrap(),
                Err(e) => write!(out, "{},{},,,{}", r.class, r.side, csv_field(e)).unwrap(),
            }
            if timing {
                write!(out, ",{:.3}", r.wall_seconds).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Every evaluated point of every side.
    pub fn points_csv(&self) -> String {
        let mut out = format!("{POINTS_CSV_HEADER}\n");
        for r in &self.rows {
            if let Ok(t) = &r.result {
                for p in &t.points {
                    writeln!(out, "{},{},{},{},{},{:.4}", p.class, p.side, p.n, p.samples, p.successes, p.p_emb).unwrap();
                }
            }
        }
        out
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fitted_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
