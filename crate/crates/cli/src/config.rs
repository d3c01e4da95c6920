//! Run configuration: defaults, then an optional JSON file, then flags.

use anyhow::{Context, Result};
use king_embed::bench::BenchConfig;
use king_embed::pssa::ScheduleFamily;
use serde::Deserialize;
use std::path::Path;

/// One layer of settings. Every field is optional; set fields override the
/// layer below. The same keys are accepted in configuration files.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub t_max: Option<u64>,
    #[serde(alias = "schedule")]
    pub family: Option<ScheduleFamily>,
    #[serde(rename = "T0")]
    pub t0: Option<f64>,
    #[serde(rename = "T_half")]
    pub t_half: Option<f64>,
    pub beta: Option<f64>,
    pub ps_start: Option<f64>,
    pub ps_end: Option<f64>,
    pub pa_start: Option<f64>,
    pub pa_end: Option<f64>,
    pub reference_t_max: Option<u64>,
    pub degree_weighted: Option<bool>,
    pub terminal: Option<bool>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub success: Option<usize>,
    pub step: Option<usize>,
    pub refine: Option<bool>,
    pub require_connected: Option<bool>,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Fully resolved settings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub bench: BenchConfig,
    pub seed: u64,
}

impl RunConfig {
    pub fn apply(mut self, layer: &FileConfig) -> Self {
        let s = &mut self.bench.embed.schedule;
        fn set<T: Copy>(dst: &mut T, src: Option<T>) {
            if let Some(v) = src {
                *dst = v;
            }
        }
        set(&mut s.t_max, layer.t_max);
        set(&mut s.family, layer.family);
        set(&mut s.t0, layer.t0);
        set(&mut s.t_half, layer.t_half);
        set(&mut s.beta, layer.beta);
        set(&mut s.ps_start, layer.ps_start);
        set(&mut s.ps_end, layer.ps_end);
        set(&mut s.pa_start, layer.pa_start);
        set(&mut s.pa_end, layer.pa_end);
        let e = &mut self.bench.embed;
        if layer.reference_t_max.is_some() {
            e.reference_t_max = layer.reference_t_max;
        }
        set(&mut e.degree_weighted, layer.degree_weighted);
        set(&mut e.terminal, layer.terminal);
        let b = &mut self.bench;
        set(&mut b.samples, layer.samples);
        set(&mut b.success, layer.success);
        set(&mut b.step, layer.step);
        set(&mut b.refine, layer.refine);
        set(&mut b.require_connected, layer.require_connected);
        set(&mut self.seed, layer.seed);
        self
    }
}
