//! Annealing followed by terminal search, with the result certified by the
//! verifier.

use crate::graphs::InputGraph;
use crate::hardware::KingGraph;
use crate::placement::Placement;
use crate::pssa::{run_pssa, PssaError, PssaOptions, RunReport, ScheduleConfig};
use crate::terminal::{terminal_search, TerminalReport};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbedConfig {
    pub schedule: ScheduleConfig,
    pub degree_weighted: bool,
    pub terminal: bool,
    /// When set, temperatures and cooling are rescaled from a schedule tuned
    /// for this many iterations, see [`ScheduleConfig::scaled_to_reference`].
    pub reference_t_max: Option<u64>,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig { schedule: ScheduleConfig::default(), degree_weighted: false, terminal: true, reference_t_max: None }
    }
}

impl EmbedConfig {
    /// The schedule actually handed to the annealer.
    pub fn effective_schedule(&self) -> ScheduleConfig {
        match self.reference_t_max {
            Some(r) => self.schedule.clone().scaled_to_reference(r),
            None => self.schedule.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedReport {
    /// Verifier result for the returned placement.
    pub found: bool,
    pub embedded_edges: usize,
    pub total_edges: usize,
    pub pssa: RunReport,
    /// Present when terminal search ran.
    pub terminal: Option<TerminalReport>,
}

/// Runs the configured pipeline. Terminal search only runs when annealing
/// alone did not embed the graph.
pub fn embed(
    graph: &InputGraph,
    king: &KingGraph,
    config: &EmbedConfig,
    seed: u64,
) -> Result<(Placement, EmbedReport), PssaError> {
    let schedule = config.effective_schedule();
    let (mut placement, pssa) =
        run_pssa(graph, king, &schedule, seed, PssaOptions { degree_weighted: config.degree_weighted })?;
    let mut terminal = None;
    if config.terminal && !pssa.found {
        let (p, r) = terminal_search(placement, graph, king);
        placement = p;
        terminal = Some(r);
    }
    let verdict = placement.verify(graph, king);
    let report = EmbedReport {
        found: verdict.is_minor_embedding,
        embedded_edges: verdict.embedded_edges,
        total_edges: graph.edge_count(),
        pssa,
        terminal,
    };
    Ok((placement, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::gen_random_cubic;

    fn config(t_max: u64, terminal: bool) -> EmbedConfig {
        EmbedConfig {
            schedule: ScheduleConfig { t_max, ..Default::default() },
            terminal,
            reference_t_max: Some(crate::pssa::DEFAULT_T_MAX),
            ..Default::default()
        }
    }

    #[test]
    fn terminal_never_hurts() {
        let king = KingGraph::new(8).unwrap();
        for seed in 0..10 {
            let g = gen_random_cubic(22, seed).unwrap();
            let (_, plain) = embed(&g, &king, &config(20_000, false), seed).unwrap();
            let (p, full) = embed(&g, &king, &config(20_000, true), seed).unwrap();
            assert!(full.embedded_edges >= plain.embedded_edges);
            assert!(full.found >= plain.found);
            assert_eq!(full.found, p.verify(&g, &king).is_minor_embedding);
            assert_eq!(full.terminal.is_some(), !plain.pssa.found);
        }
    }

    #[test]
    fn baseline_sizes_need_no_annealing() {
        let king = KingGraph::new(6).unwrap();
        let g = InputGraph::complete(7);
        let (_, r) = embed(&g, &king, &config(0, true), 3).unwrap();
        assert!(r.found);
        assert_eq!(r.pssa.iterations, 0);
        assert!(r.terminal.is_none());
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = config(1234, false);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<EmbedConfig>(&text).unwrap(), c);
        let partial: EmbedConfig = serde_json::from_str(r#"{"degree_weighted": true}"#).unwrap();
        assert!(partial.degree_weighted && partial.terminal);
        assert_eq!(partial.schedule, ScheduleConfig::default());
    }
}
