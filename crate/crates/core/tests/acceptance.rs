//! Acceptance checks. Each criterion prints one PASS or FAIL line; the
//! binary exits non-zero when any criterion fails.
//!
//! `ACCEPTANCE_ONLY=3,7` restricts the run to the listed criteria.

use king_embed::baseline::{clique_upper_bound, complete_embedding, initial_placement, tree_decomposition};
use king_embed::bench::{embedding_probability, embedding_threshold, threshold_sweep, BenchConfig, GraphClass};
use king_embed::graphs::{gen_barabasi_albert, gen_erdos_renyi_connected, gen_random_cubic};
use king_embed::pipeline::{embed, EmbedConfig};
use king_embed::placement::{compile_ising, format_placement, IsingModel, PlacementFile};
use king_embed::pssa::{
    propose_shift, propose_swap, run_pssa, PssaOptions, ScheduleConfig, ScheduleFamily, DEFAULT_T_MAX,
};
use king_embed::rng::{derive_seed, from_seed};
use king_embed::terminal::{build_pattern_table, cleanup};
use king_embed::{InputGraph, KingGraph, Placement};
use rand::Rng as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1}s, limit {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn desk(t_max: u64, degree_weighted: bool) -> EmbedConfig {
    EmbedConfig {
        schedule: ScheduleConfig { t_max, family: ScheduleFamily::S3, ..Default::default() },
        degree_weighted,
        terminal: true,
        reference_t_max: Some(DEFAULT_T_MAX),
    }
}

fn c1_baseline_validity() -> Outcome {
    let start = Instant::now();
    for side in 2..=64 {
        let king = KingGraph::new(side).unwrap();
        let pattern = complete_embedding(side).map_err(|e| e.to_string())?;
        let p = pattern.placement(&king);
        let v = p.verify(&InputGraph::complete(side + 1), &king);
        ensure(v.is_minor_embedding, || format!("L = {side}: {:?}", v.violations))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("K_(L+1) verified for L = 2..64 in {:.2}s", start.elapsed().as_secs_f64()))
}

fn c2_treewidth() -> Outcome {
    let start = Instant::now();
    for side in 2..=100 {
        let king = KingGraph::new(side).unwrap();
        let td = tree_decomposition(side).map_err(|e| e.to_string())?;
        td.validate(&king).map_err(|e| format!("L = {side}: {e}"))?;
        ensure(td.width() == 2 * side - 1, || format!("L = {side}: width {}", td.width()))?;
        ensure(clique_upper_bound(side) == 2 * side, || format!("L = {side}: clique bound"))?;
    }
    within(start, Duration::from_secs(10))?;
    let config = EmbedConfig { schedule: ScheduleConfig { t_max: 100_000, ..Default::default() }, ..Default::default() };
    for side in 3..=8 {
        let king = KingGraph::new(side).unwrap();
        let g = InputGraph::complete(2 * side + 1);
        // K_7 has more edges than KG_{3,3}; the engine refuses it up front.
        let found = match embed(&g, &king, &config, side as u64) {
            Ok((_, r)) => r.found,
            Err(_) => false,
        };
        ensure(!found, || format!("K_{} reported as embedded in KG_{side}", 2 * side + 1))?;
    }
    Ok("T1-T3 and width 2L-1 for L = 2..100; K_(2L+1) not found for L = 3..8".into())
}

/// A placement reached by random moves from the initial placement.
fn scrambled(graph: &InputGraph, king: &KingGraph, seed: u64) -> (Placement, king_embed::baseline::GuidingPattern) {
    let pattern = complete_embedding(king.side()).unwrap();
    let mut p = initial_placement(graph, &pattern, king).unwrap();
    let mut rng = from_seed(seed);
    for _ in 0..2000 {
        random_move(&mut p, graph, king, &pattern, &mut rng, true);
    }
    (p, pattern)
}

/// Proposes a random move and returns its incremental delta; commits it
/// when `accept` holds.
fn random_move(
    p: &mut Placement,
    graph: &InputGraph,
    king: &KingGraph,
    pattern: &king_embed::baseline::GuidingPattern,
    rng: &mut king_embed::rng::Rng,
    accept: bool,
) -> Option<i64> {
    let shift = rng.random_bool(0.5);
    let delta = if shift {
        let s = propose_shift(p, graph, king, pattern, rng, 0.5, false)?;
        p.evaluate_shift(graph, king, s)
    } else {
        let (i, j) = propose_swap(p, graph, king, rng)?;
        p.evaluate_swap(graph, king, i, j)
    };
    if accept {
        p.commit();
    } else {
        p.discard();
    }
    Some(delta)
}

fn c3_scoring_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (side, n) in [(6usize, 14usize), (12, 40)] {
        let king = KingGraph::new(side).unwrap();
        for variant in 0..2u64 {
            let g = if variant == 0 { gen_random_cubic(n, side as u64).unwrap() } else { gen_barabasi_albert(n, 2, 2, 9).unwrap() };
            let (mut p, pattern) = scrambled(&g, &king, 31 + variant);
            let mut rng = from_seed(101 + side as u64 + variant);
            let mut steps = 0;
            while steps < 10_000 {
                let accept = rng.random_bool(0.5);
                let before = p.count_embedded_edges(&g, &king);
                let mut probe = p.clone();
                let Some(delta) = random_move(&mut probe, &g, &king, &pattern, &mut rng.clone(), true) else {
                    random_move(&mut p, &g, &king, &pattern, &mut rng, accept);
                    continue;
                };
                let truth = probe.count_embedded_edges(&g, &king) as i64 - before as i64;
                ensure(delta == truth, || format!("L = {side}: delta {delta}, recount {truth}"))?;
                let same = random_move(&mut p, &g, &king, &pattern, &mut rng, accept).unwrap();
                ensure(same == delta, || "replayed proposal differs".into())?;
                let now = p.count_embedded_edges(&g, &king);
                ensure(p.embedded_edges() == now, || format!("L = {side}: tracked {}, recount {now}", p.embedded_edges()))?;
                ensure(p.edge_reps() == &p.recount_edge_reps(&g, &king)[..], || "edge counts drifted".into())?;
                steps += 1;
                checked += 1;
            }
            p.check_invariants(&g, &king)?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{checked} moves, incremental score equals recount at every step"))
}

/// Ring oracle on coordinates with union-find.
fn ring_single_cluster(pattern: u8) -> bool {
    const POS: [(i32, i32); 8] = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)];
    let on: Vec<usize> = (0..8).filter(|k| pattern >> k & 1 == 1).collect();
    if on.is_empty() {
        return false;
    }
    let mut parent: Vec<usize> = (0..8).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &a in &on {
        for &b in &on {
            let (da, db) = (POS[a].0 - POS[b].0, POS[a].1 - POS[b].1);
            if a < b && da.abs() <= 1 && db.abs() <= 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let root = find(&mut parent, on[0]);
    on.iter().all(|&k| find(&mut parent, k) == root)
}

fn c4_pattern_table() -> Outcome {
    let start = Instant::now();
    let table = build_pattern_table();
    let mut deletable = 0;
    for p in 0..=255u8 {
        ensure(table.get(p) == ring_single_cluster(p), || format!("pattern {p:#010b} disagrees"))?;
        deletable += table.get(p) as usize;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("256 entries agree ({deletable} deletable)"))
}

fn flood_fill_connected(p: &Placement, king: &KingGraph) -> bool {
    p.chains().iter().all(|ch| {
        let Some(&first) = ch.first() else { return false };
        let mut seen = std::collections::HashSet::from([first]);
        let mut stack = vec![first];
        while let Some(c) = stack.pop() {
            for &w in king.neighbors(c) {
                let w = w as usize;
                if ch.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == ch.len()
    })
}

fn post_pssa(side: usize, n: usize, seed: u64, t_max: u64) -> (InputGraph, KingGraph, Placement) {
    let king = KingGraph::new(side).unwrap();
    let g = gen_random_cubic(n, seed).unwrap();
    let c = ScheduleConfig { t_max, ..Default::default() };
    let (p, _) = run_pssa(&g, &king, &c, seed, PssaOptions::default()).unwrap();
    (g, king, p)
}

fn c5_cleanup() -> Outcome {
    let start = Instant::now();
    let table = build_pattern_table();
    let mut freed = 0;
    for seed in 0..100 {
        let n = 24 + 2 * (seed as usize % 8);
        let (g, king, mut p) = post_pssa(12, n, seed, 20_000);
        let before = p.count_embedded_edges(&g, &king);
        let free = cleanup(&mut p, &g, &king, &table);
        freed += free.len();
        ensure(p.count_embedded_edges(&g, &king) == before, || format!("seed {seed}: score changed"))?;
        ensure(p.embedded_edges() == before, || format!("seed {seed}: tracked score changed"))?;
        ensure(flood_fill_connected(&p, &king), || format!("seed {seed}: chain disconnected"))?;
        ensure(p.verify(&g, &king).is_super_vertex_placement, || format!("seed {seed}: M1/M2 violated"))?;
        ensure(free.cells() == p.free_cells(), || format!("seed {seed}: free set out of sync"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("100 states, score and connectivity preserved, {freed} cells freed in total"))
}

/// Matched runs with and without terminal search under one schedule.
fn dominance(base: &EmbedConfig, tag: u64) -> Result<String, String> {
    let side = 20;
    let king = KingGraph::new(side).unwrap();
    let plain_cfg = EmbedConfig { terminal: false, ..base.clone() };
    let (mut plain_found, mut full_found, mut plain_e, mut full_e) = (0, 0, 0, 0);
    for k in 0..20u64 {
        let g = gen_random_cubic(2 * side, derive_seed(6, &[k, 0])).unwrap();
        let seed = derive_seed(6, &[k, tag]);
        let (_, plain) = embed(&g, &king, &plain_cfg, seed).map_err(|e| e.to_string())?;
        let (_, full) = embed(&g, &king, base, seed).map_err(|e| e.to_string())?;
        ensure(full.embedded_edges >= plain.embedded_edges, || {
            format!("pair {k}: {} with terminal < {} without", full.embedded_edges, plain.embedded_edges)
        })?;
        plain_found += plain.found as usize;
        full_found += full.found as usize;
        plain_e += plain.embedded_edges;
        full_e += full.embedded_edges;
    }
    ensure(full_found >= plain_found, || format!("{full_found} full embeddings with terminal < {plain_found} without"))?;
    Ok(format!("embeddings {plain_found} -> {full_found} of 20, edges {plain_e} -> {full_e}"))
}

fn c6_terminal_dominance() -> Outcome {
    let start = Instant::now();
    let paper = EmbedConfig { schedule: ScheduleConfig { t_max: 1_000_000, ..Default::default() }, ..Default::default() };
    let a = dominance(&paper, 1)?;
    let b = dominance(&desk(1_000_000, false), 2)?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("paper schedule: {a}; desk-scaled schedule: {b}"))
}

fn threshold_check(class: GraphClass, side: usize, degree_weighted: bool, t_max: u64, seed: u64) -> Result<(usize, String), String> {
    let cfg = BenchConfig { embed: desk(t_max, degree_weighted), ..Default::default() };
    let t = embedding_threshold(class, side, &cfg, seed).map_err(|e| e.to_string())?;
    let trail: Vec<String> = t.points.iter().map(|p| format!("{}:{}", p.n, p.successes)).collect();
    Ok((t.threshold, trail.join(" ")))
}

fn c7_cubic_threshold() -> Outcome {
    let start = Instant::now();
    let (n, trail) = threshold_check(GraphClass::Cubic, 20, true, 2_000_000, 7)?;
    ensure(n > 21 && n >= 40, || format!("threshold {n} < 40 [{trail}]"))?;
    within(start, Duration::from_secs(3600))?;
    Ok(format!("n(20) = {n} (c = {:.2}), points n:successes [{trail}]", n as f64 / 20.0))
}

fn c8_ba_threshold() -> Outcome {
    let start = Instant::now();
    let (n, trail) = threshold_check(GraphClass::BA_DEFAULT, 20, false, 2_000_000, 8)?;
    ensure(n >= 30, || format!("threshold {n} < 30 [{trail}]"))?;
    within(start, Duration::from_secs(3600))?;
    Ok(format!("n(20) = {n} (c = {:.2}), points n:successes [{trail}]", n as f64 / 20.0))
}

fn c9_baseline_floor() -> Outcome {
    let start = Instant::now();
    let side = 10;
    let cfg = BenchConfig {
        embed: EmbedConfig { schedule: ScheduleConfig { t_max: 0, ..Default::default() }, terminal: false, ..Default::default() },
        ..Default::default()
    };
    let mut points = 0;
    for class in [GraphClass::Cubic, GraphClass::BA_DEFAULT, GraphClass::ER_DEFAULT, GraphClass::Complete] {
        let mut n = class.normalize(1);
        while n <= side + 1 {
            let p = embedding_probability(class, n, side, &cfg, 9).map_err(|e| e.to_string())?;
            ensure(p.p_emb == 1.0, || format!("{class} n = {n}: p_emb = {}", p.p_emb))?;
            points += 1;
            n = class.normalize(n + 1);
        }
    }
    // Even with annealing enabled, baseline sizes succeed before the first iteration.
    let king = KingGraph::new(side).unwrap();
    let full = ScheduleConfig::default();
    for (k, g) in [
        gen_random_cubic(10, 1).unwrap(),
        gen_barabasi_albert(11, 2, 2, 1).unwrap(),
        gen_erdos_renyi_connected(11, 0.2, 1).unwrap(),
        InputGraph::complete(11),
    ]
    .iter()
    .enumerate()
    {
        let (_, r) = run_pssa(g, &king, &full, k as u64, PssaOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.found && r.iterations == 0, || format!("graph {k}: {} iterations", r.iterations))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("p_emb = 1 at {points} (class, n <= L+1) points, zero iterations"))
}

fn c10_er_collapse() -> Outcome {
    let start = Instant::now();
    let side = 40;
    let (n, trail) = threshold_check(GraphClass::ER_DEFAULT, side, false, 2_000_000, 10)?;
    let excess = n as f64 - (side + 1) as f64;
    ensure(excess <= 0.25 * side as f64, || format!("threshold {n}, excess {excess} > 10 [{trail}]"))?;
    within(start, Duration::from_secs(3600))?;
    Ok(format!("n(40) = {n}, excess over L+1 = {excess} <= 10 [{trail}]"))
}

fn c11_determinism() -> Outcome {
    let king = KingGraph::new(10).unwrap();
    let g = gen_random_cubic(26, 11).unwrap();
    let cfg = desk(200_000, true);
    let run = || {
        let (p, r) = embed(&g, &king, &cfg, 99).unwrap();
        (format_placement(&PlacementFile::from_placement(&p)), serde_json::to_string(&r).unwrap())
    };
    let a = run();
    ensure(a == run(), || "embed output differs between identical runs".into())?;
    let bench = BenchConfig { samples: 6, success: 5, embed: desk(20_000, false), ..Default::default() };
    let sweep = || {
        let r = threshold_sweep(GraphClass::Cubic, &[5, 6], &bench, 123);
        (r.threshold_csv(false), r.points_csv())
    };
    let b = sweep();
    ensure(b == sweep(), || "bench CSV differs between identical runs".into())?;
    Ok(format!("placement ({} bytes) and CSV ({} bytes) byte-identical", a.0.len(), b.0.len() + b.1.len()))
}

fn c12_compile() -> Outcome {
    let start = Instant::now();
    let mut rng = from_seed(12);
    let mut cases = 0;
    let mut instances: Vec<(KingGraph, InputGraph, Placement)> = Vec::new();
    for side in [4, 8, 12] {
        let king = KingGraph::new(side).unwrap();
        let g = InputGraph::complete(side + 1);
        let p = complete_embedding(side).unwrap().placement(&king);
        instances.push((king, g, p));
    }
    let king = KingGraph::new(10).unwrap();
    let g = gen_random_cubic(24, 3).unwrap();
    let (p, r) = embed(&g, &king, &desk(500_000, true), 3).unwrap();
    ensure(r.found, || "fixture embedding not found".into())?;
    instances.push((king, g, p));

    for (king, g, p) in &instances {
        for _ in 0..5 {
            let j: Vec<(usize, usize, f64)> =
                g.edges().map(|(a, b)| (a, b, rng.random_range(1..=5) as f64 * if rng.random_bool(0.5) { 1.0 } else { -1.0 })).collect();
            let h: Vec<f64> = (0..g.vertex_count()).map(|_| rng.random_range(-7..=7) as f64).collect();
            let model = IsingModel { h: h.clone(), j };
            let hw = compile_ising(&model, p, king, 1.0).map_err(|e| e.to_string())?;
            ensure(hw.inter_chain.len() == g.edge_count(), || "coupler count differs from |E(G)|".into())?;
            for (a, b, _) in &hw.inter_chain {
                ensure(king.is_adjacent(*a, *b), || "inter-chain coupler off the hardware".into())?;
            }
            for (i, ch) in p.chains().iter().enumerate() {
                let sum = ch.iter().fold(0.0, |s, &c| s + hw.fields[c]);
                ensure(sum == h[i], || format!("vertex {i}: field sum {sum} != {}", h[i]))?;
            }
            cases += 1;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{cases} models: |E(G)| couplers and exact field sums"))
}

fn main() {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(usize, &str, fn() -> Outcome); 12] = [
        (1, "baseline validity", c1_baseline_validity),
        (2, "treewidth construction", c2_treewidth),
        (3, "scoring oracle", c3_scoring_oracle),
        (4, "pattern-table oracle", c4_pattern_table),
        (5, "cleanup conservation", c5_cleanup),
        (6, "terminal-search dominance", c6_terminal_dominance),
        (7, "desk-scale threshold, cubic", c7_cubic_threshold),
        (8, "desk-scale threshold, BA", c8_ba_threshold),
        (9, "baseline floor", c9_baseline_floor),
        (10, "ER collapse direction", c10_er_collapse),
        (11, "determinism", c11_determinism),
        (12, "compile conservation", c12_compile),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
