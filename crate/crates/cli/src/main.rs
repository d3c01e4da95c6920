//! `king-embed`: generate graphs, embed them into King's-graph hardware,
//! verify placements, run threshold benchmarks and print bounds.
//!
//! Exit codes: 0 success, 1 no minor embedding found (or the checked
//! placement is not one), 2 usage or input errors.

mod config;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::{FileConfig, RunConfig};
use king_embed::baseline::{
    clique_upper_bound, min_hardware_vertices, min_supervertex_size, treewidth_upper_bound,
};
use king_embed::bench::{threshold_sweep, GraphClass};
use king_embed::graphs::{self, format_graph, read_graph};
use king_embed::pipeline::embed;
use king_embed::placement::{
    compile_ising, format_placement, read_placement, verify_chains, IsingModel, PlacementFile,
};
use king_embed::pssa::ScheduleFamily;
use king_embed::{KingGraph, Placement};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "king-embed", version, about = "Minor embedding into King's-graph hardware")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random input graph.
    Gen(GenArgs),
    /// Embed an input graph into KG_{L,L}.
    Embed(EmbedArgs),
    /// Check a placement file against an input graph.
    Verify(VerifyArgs),
    /// Estimate embedding thresholds over a list of hardware sizes.
    Bench(BenchArgs),
    /// Print clique and vertex-count bounds for KG_{L,L}.
    Bounds(BoundsArgs),
    /// Compile an Ising model onto hardware through a placement.
    Compile(CompileArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Graph class: cubic, ba or er.
    #[arg(long = "type")]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Edge density for er.
    #[arg(long, default_value_t = 0.2)]
    rho: f64,
    /// Seed clique size for ba.
    #[arg(long, default_value_t = 2)]
    m0: usize,
    /// Edges per added vertex for ba.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Schedule and pipeline settings shared by `embed` and `bench`. Unset flags
/// fall back to the configuration file, then to the defaults shown.
#[derive(Args)]
struct PipelineArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Annealing iterations [default: 70000000]. 0 keeps the initial placement.
    #[arg(long)]
    tmax: Option<u64>,
    /// Temperature schedule: s1, s2, s3 or s4 [default: s3].
    #[arg(long)]
    schedule: Option<ScheduleFamily>,
    /// First-phase start temperature [default: 60.315].
    #[arg(long)]
    t0: Option<f64>,
    /// Second-phase start temperature [default: 33.435].
    #[arg(long)]
    t_half: Option<f64>,
    /// Exponential cooling factor per 1000 iterations [default: 0.9999].
    #[arg(long)]
    beta: Option<f64>,
    /// Shift probability at t = 0 [default: 1].
    #[arg(long)]
    ps_start: Option<f64>,
    /// Shift probability at t = tmax [default: 0].
    #[arg(long)]
    ps_end: Option<f64>,
    /// Away-shift probability at t = 0 [default: 0.095].
    #[arg(long)]
    pa_start: Option<f64>,
    /// Away-shift probability at t = tmax [default: 0.487].
    #[arg(long)]
    pa_end: Option<f64>,
    /// Rescale T0, T_half and beta from a schedule tuned for this many
    /// iterations (temperatures times tmax/R, beta to the power R/tmax).
    #[arg(long, value_name = "R")]
    reference_tmax: Option<u64>,
    /// Shorthand for --reference-tmax 70000000.
    #[arg(long, conflicts_with = "reference_tmax")]
    desk_scale: bool,
    /// Weight shift directions by chain size over degree.
    #[arg(long)]
    degree_weighted: bool,
    /// Skip the terminal search after annealing.
    #[arg(long)]
    no_terminal: bool,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Hardware side length.
    #[arg(long = "L")]
    side: usize,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Write the resulting placement here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    placement: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Graph class: cubic, ba, er or complete.
    #[arg(long)]
    class: String,
    /// Comma-separated hardware side lengths.
    #[arg(long = "L", value_delimiter = ',', required = true)]
    sides: Vec<usize>,
    /// Samples per point [default: 20].
    #[arg(long)]
    samples: Option<usize>,
    /// Successes needed for a point to pass [default: 19].
    #[arg(long)]
    success: Option<usize>,
    /// Size increment between points [default: 1].
    #[arg(long)]
    step: Option<usize>,
    /// Do not bisect between the last passing and first failing size.
    #[arg(long)]
    no_refine: bool,
    /// Redraw disconnected cubic graphs.
    #[arg(long)]
    require_connected: bool,
    /// Edge density for er.
    #[arg(long, default_value_t = 0.2)]
    rho: f64,
    #[arg(long, default_value_t = 2)]
    m0: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Threshold CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-point CSV.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Full JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Add a wall-time column to the threshold CSV.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long = "L")]
    side: usize,
    /// Clique size for the vertex-count bounds.
    #[arg(long = "N")]
    clique: Option<usize>,
    /// Maximum hardware degree.
    #[arg(long, default_value_t = 8)]
    d: usize,
}

#[derive(Args)]
struct CompileArgs {
    /// JSON Ising model with fields "h" and "J".
    #[arg(long)]
    ising: PathBuf,
    #[arg(long)]
    placement: PathBuf,
    /// Multiplier of the chain coupling strength.
    #[arg(long, default_value_t = 1.0)]
    chain_scale: f64,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Compile(a) => cmd_compile(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => stdout(text),
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn stdout(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn king(side: usize) -> Result<KingGraph> {
    KingGraph::new(side).context("invalid hardware size")
}

fn cmd_gen(a: GenArgs) -> Result<bool> {
    let g = match a.kind.as_str() {
        "cubic" => graphs::gen_random_cubic(a.n, a.seed),
        "ba" => graphs::gen_barabasi_albert(a.n, a.m0, a.m, a.seed),
        "er" => graphs::gen_erdos_renyi_connected(a.n, a.rho, a.seed),
        other => bail!("unknown graph type '{other}', expected cubic, ba or er"),
    }?;
    emit(a.out.as_deref(), &format_graph(&g))?;
    Ok(true)
}

fn pipeline_config(a: &PipelineArgs) -> Result<RunConfig> {
    let file = match &a.config {
        Some(p) => FileConfig::read(p)?,
        None => FileConfig::default(),
    };
    let mut flags = FileConfig {
        t_max: a.tmax,
        family: a.schedule,
        t0: a.t0,
        t_half: a.t_half,
        beta: a.beta,
        ps_start: a.ps_start,
        ps_end: a.ps_end,
        pa_start: a.pa_start,
        pa_end: a.pa_end,
        reference_t_max: a.reference_tmax.or(a.desk_scale.then_some(king_embed::pssa::DEFAULT_T_MAX)),
        seed: a.seed,
        ..FileConfig::default()
    };
    if a.degree_weighted {
        flags.degree_weighted = Some(true);
    }
    if a.no_terminal {
        flags.terminal = Some(false);
    }
    let cfg = RunConfig::default().apply(&file).apply(&flags);
    cfg.bench.validate()?;
    Ok(cfg)
}

fn cmd_embed(a: EmbedArgs) -> Result<bool> {
    let cfg = pipeline_config(&a.pipeline)?;
    let g = read_graph(&a.graph).with_context(|| format!("reading {}", a.graph.display()))?;
    let king = king(a.side)?;
    let (p, report) = embed(&g, &king, &cfg.bench.embed, cfg.seed)?;
    if let Some(out) = &a.out {
        emit(Some(out), &format_placement(&PlacementFile::from_placement(&p)))?;
    }
    let text = json!({
        "found": report.found,
        "embedded_edges": report.embedded_edges,
        "total_edges": report.total_edges,
        "L": a.side,
        "n": g.vertex_count(),
        "seed": cfg.seed,
        "schedule": cfg.bench.embed.effective_schedule(),
        "degree_weighted": cfg.bench.embed.degree_weighted,
        "pssa": report.pssa,
        "terminal": report.terminal,
    });
    stdout(&(serde_json::to_string_pretty(&text)? + "\n"))?;
    Ok(report.found)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let g = read_graph(&a.graph).with_context(|| format!("reading {}", a.graph.display()))?;
    let file = read_placement(&a.placement).with_context(|| format!("reading {}", a.placement.display()))?;
    let king = king(file.side)?;
    let chains = file.cell_chains()?;
    let verdict = verify_chains(&chains, &g, &king);
    stdout(&(serde_json::to_string_pretty(&verdict)? + "\n"))?;
    Ok(verdict.is_minor_embedding)
}

fn cmd_bench(a: BenchArgs) -> Result<bool> {
    let mut cfg = pipeline_config(&a.pipeline)?;
    let class = match a.class.parse::<GraphClass>().map_err(anyhow::Error::msg)? {
        GraphClass::Ba { .. } => GraphClass::Ba { m0: a.m0, m: a.m },
        GraphClass::Er { .. } => GraphClass::Er { rho: a.rho },
        c => c,
    };
    let b = &mut cfg.bench;
    b.samples = a.samples.unwrap_or(b.samples);
    b.success = a.success.unwrap_or(b.success);
    b.step = a.step.unwrap_or(b.step);
    b.refine &= !a.no_refine;
    b.require_connected |= a.require_connected;
    b.validate()?;
    if a.sides.is_empty() {
        bail!("--L needs at least one side length");
    }
    let report = threshold_sweep(class, &a.sides, &cfg.bench, cfg.seed);
    for row in &report.rows {
        match &row.result {
            Ok(t) => eprintln!("{} L={}: threshold {} ({:.1}s)", row.class, row.side, t.threshold, row.wall_seconds),
            Err(e) => eprintln!("{} L={}: {e}", row.class, row.side),
        }
    }
    emit(a.out.as_deref(), &report.threshold_csv(a.timing))?;
    if let Some(p) = &a.points {
        emit(Some(p), &report.points_csv())?;
    }
    if let Some(p) = &a.report {
        emit(Some(p), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    Ok(true)
}

fn cmd_bounds(a: BoundsArgs) -> Result<bool> {
    let king = king(a.side)?;
    let mut out = json!({
        "L": a.side,
        "cells": king.cell_count(),
        "hardware_edges": king.edge_count(),
        "baseline_clique": a.side + 1,
        "clique_upper_bound": clique_upper_bound(a.side),
        "treewidth_upper_bound": treewidth_upper_bound(a.side),
    });
    if let Some(n) = a.clique {
        out["N"] = json!(n);
        out["d"] = json!(a.d);
        out["min_hardware_vertices"] = json!(min_hardware_vertices(n, a.d)?);
        out["min_supervertex_size"] = json!(min_supervertex_size(n, a.d)?);
    }
    stdout(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(true)
}

fn load_placement(file: &PlacementFile, g: &king_embed::InputGraph, king: &KingGraph) -> Result<Placement> {
    let chains = file.cell_chains()?;
    let p = if file.path_order {
        Placement::from_paths(g, king, &chains)
    } else {
        Placement::from_sets(g, king, &chains)
    };
    p.context("invalid placement")
}

fn cmd_compile(a: CompileArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&a.ising).with_context(|| format!("reading {}", a.ising.display()))?;
    let model: IsingModel = serde_json::from_str(&text).context("malformed Ising model")?;
    let file = read_placement(&a.placement).with_context(|| format!("reading {}", a.placement.display()))?;
    let king = king(file.side)?;
    let g = model.support()?;
    let p = load_placement(&file, &g, &king)?;
    let hw = match compile_ising(&model, &p, &king, a.chain_scale) {
        Ok(hw) => hw,
        Err(king_embed::placement::CompileError::NotAnEmbedding) => {
            eprintln!("error: placement is not a minor embedding of the coupling graph");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&hw)? + "\n"))?;
    Ok(true)
}
