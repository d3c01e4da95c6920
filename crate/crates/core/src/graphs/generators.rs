//! Seeded random graph generators.

use super::{GraphError, InputGraph};
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::HashSet;

fn key(a: usize, b: usize) -> u64 {
    ((a.min(b) as u64) << 32) | a.max(b) as u64
}

/// Random 3-regular graph by the Steger–Wormald pairing scheme.
///
/// Each vertex owns three points. Repeatedly two unpaired points are drawn
/// uniformly; the pair is kept if it joins distinct, not yet adjacent
/// vertices. When no suitable pair remains and points are left over, the
/// round restarts. The result need not be connected.
pub fn gen_random_cubic(n: usize, seed: u64) -> Result<InputGraph, GraphError> {
    const D: usize = 3;
    if n < 4 || n % 2 != 0 {
        return Err(GraphError::InvalidParameters(format!(
            "a cubic graph needs an even vertex count of at least 4, got {n}"
        )));
    }
    let mut rng = rng::from_seed(seed);
    'round: loop {
        let mut points: Vec<usize> = (0..n * D).collect();
        let mut edges: HashSet<u64> = HashSet::with_capacity(n * D / 2);
        let mut list = Vec::with_capacity(n * D / 2);
        while !points.is_empty() {
            let len = points.len();
            let mut found = None;
            // Random attempts first; fall back to an exhaustive check so a
            // stuck round is detected rather than looped on forever.
            for _ in 0..64 {
                let x = rng.random_range(0..len);
                let y = rng.random_range(0..len);
                let (u, v) = (points[x] / D, points[y] / D);
                if u != v && !edges.contains(&key(u, v)) {
                    found = Some((x, y));
                    break;
                }
            }
            if found.is_none() {
                let suitable: Vec<(usize, usize)> = (0..len)
                    .flat_map(|x| (x + 1..len).map(move |y| (x, y)))
                    .filter(|&(x, y)| {
                        let (u, v) = (points[x] / D, points[y] / D);
                        u != v && !edges.contains(&key(u, v))
                    })
                    .collect();
                match suitable.as_slice() {
                    [] => continue 'round,
                    s => found = Some(s[rng.random_range(0..s.len())]),
                }
            }
            let (x, y) = found.unwrap();
            let (u, v) = (points[x] / D, points[y] / D);
            edges.insert(key(u, v));
            list.push((u, v));
            let (hi, lo) = (x.max(y), x.min(y));
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        return InputGraph::new(n, list);
    }
}

/// Barabási–Albert preferential attachment grown from the clique `K_{m0}`.
///
/// Each new vertex attaches to `m` distinct existing vertices, each chosen
/// with probability proportional to its current degree.
pub fn gen_barabasi_albert(n: usize, m0: usize, m: usize, seed: u64) -> Result<InputGraph, GraphError> {
    if !(2 <= m && m <= m0 && m0 <= n) {
        return Err(GraphError::InvalidParameters(format!(
            "need 2 <= m <= m0 <= n, got m={m}, m0={m0}, n={n}"
        )));
    }
    let mut rng = rng::from_seed(seed);
    let mut edges = Vec::with_capacity(m0 * (m0 - 1) / 2 + m * (n - m0));
    // Every edge endpoint once; uniform draws from it are degree-proportional.
    let mut ends: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for a in 0..m0 {
        for b in a + 1..m0 {
            edges.push((a, b));
            ends.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m0..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.random_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            ends.extend([t, v]);
        }
    }
    InputGraph::new(n, edges)
}

/// Edge target of [`gen_erdos_renyi_connected`]: `max(n-1, floor(rho*n(n-1)/2 + 1/2))`.
pub fn erdos_renyi_edge_target(n: usize, rho: f64) -> usize {
    let pairs = n * (n - 1) / 2;
    let t = (rho * pairs as f64 + 0.5).floor() as usize;
    t.min(pairs).max(n - 1)
}

/// Connected random graph: a uniform random recursive tree, then uniformly
/// drawn unoccupied pairs until the edge target is met.
pub fn gen_erdos_renyi_connected(n: usize, rho: f64, seed: u64) -> Result<InputGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameters(format!("need n >= 2, got {n}")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(GraphError::InvalidParameters(format!("density must lie in (0, 1], got {rho}")));
    }
    let mut rng = rng::from_seed(seed);
    let target = erdos_renyi_edge_target(n, rho);
    let pairs = n * (n - 1) / 2;
    let mut present: HashSet<u64> = HashSet::with_capacity(target);
    let mut edges = Vec::with_capacity(target);
    for v in 1..n {
        let p = rng.random_range(0..v);
        present.insert(key(p, v));
        edges.push((p, v));
    }
    let extra = target - edges.len();
    if extra > 0 {
        if 2 * extra <= pairs - edges.len() {
            while edges.len() < target {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                if a != b && present.insert(key(a, b)) {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        } else {
            let mut free: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| !present.contains(&key(a, b)))
                .collect();
            free.shuffle(&mut rng);
            edges.extend_from_slice(&free[..extra]);
        }
    }
    InputGraph::new(n, edges)
}
