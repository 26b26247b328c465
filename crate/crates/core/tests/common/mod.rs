//! Random instances and independent oracles shared by the integration tests
//! and the acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeSet;

use burstcore::{brute_force_msd, Density, NodeId, NodeMask, TemporalGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sequence(rng: &mut ChaCha8Rng, max_len: usize, max_value: u32) -> Vec<u32> {
    let len = rng.random_range(2..=max_len);
    (0..len).map(|_| rng.random_range(0..=max_value)).collect()
}

/// Random temporal graph with some planted structure so that cores are not
/// trivially empty. The horizon is at least 2.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, max_horizon: u32) -> TemporalGraph {
    loop {
        let n = rng.random_range(3..=max_n);
        let horizon = rng.random_range(2..=max_horizon);
        let p: f64 = rng.random_range(0.05..0.6);
        let mut edges = Vec::new();
        for t in 1..=horizon {
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.random_bool((p * 6.0 / n as f64 + 0.02).min(1.0)) {
                        edges.push((u, v, t));
                    }
                }
            }
        }
        // one flickering clique
        let size = rng.random_range(2..=n.min(7));
        let start = rng.random_range(1..=horizon);
        let end = rng.random_range(start..=horizon);
        let members: Vec<u32> = (0..size as u32).map(|i| (i * 3 + 1) % n as u32).collect::<BTreeSet<_>>().into_iter().collect();
        for t in start..=end {
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    if rng.random_bool(0.85) {
                        edges.push((u, v, t));
                    }
                }
            }
        }
        edges.push((0, 1, horizon));
        if let Ok(g) = TemporalGraph::from_triples(n, edges) {
            if g.horizon() >= 2 {
                return g;
            }
        }
    }
}

/// Per-snapshot neighbor counts by scanning every snapshot edge list.
pub fn naive_degree_sequence(g: &TemporalGraph, u: NodeId, subset: &NodeMask) -> Vec<u32> {
    let mut out = vec![0u32; g.horizon()];
    for t in 1..=g.horizon() as u32 {
        let mut nbrs = BTreeSet::new();
        for (a, b, tt) in g.edges() {
            if tt != t {
                continue;
            }
            if a == u && subset.contains(b) {
                nbrs.insert(b);
            }
            if b == u && subset.contains(a) {
                nbrs.insert(a);
            }
        }
        out[t as usize - 1] = nbrs.len() as u32;
    }
    out
}

/// Distinct unordered endpoint pairs.
pub fn pair_set(g: &TemporalGraph) -> BTreeSet<(NodeId, NodeId)> {
    g.edges().map(|(u, v, _)| (u, v)).collect()
}

/// Repeatedly scans all nodes and drops any with fewer than `k` neighbors.
pub fn naive_k_core(g: &TemporalGraph, k: Density) -> Vec<NodeId> {
    let pairs = pair_set(g);
    let mut alive: BTreeSet<NodeId> = g.nodes().collect();
    loop {
        let mut changed = false;
        for u in alive.clone() {
            let deg = pairs
                .iter()
                .filter(|(a, b)| (*a == u && alive.contains(b)) || (*b == u && alive.contains(a)))
                .count();
            if k.exceeds_count(deg as u64) {
                alive.remove(&u);
                changed = true;
            }
        }
        if !changed {
            return alive.into_iter().collect();
        }
    }
}

/// Enumerates every node subset, keeps those in which every member reaches
/// `delta`, and returns the largest after checking it contains all others.
/// Snapshot adjacency is held as bitmasks so one subset costs `n * horizon`
/// popcounts.
pub fn subset_enumeration_core(g: &TemporalGraph, l: usize, delta: Density) -> Vec<NodeId> {
    let n = g.n();
    assert!(n <= 16, "subset oracle is exponential");
    let h = g.horizon();
    let mut adj = vec![vec![0u32; n]; h];
    for (u, v, t) in g.edges() {
        adj[t as usize - 1][u.index()] |= 1 << v.0;
        adj[t as usize - 1][v.index()] |= 1 << u.0;
    }
    let mut valid: Vec<u32> = Vec::new();
    let mut ds = vec![0u32; h];
    for bits in 1u32..(1 << n) {
        let dense = (0..n).filter(|i| bits >> i & 1 == 1).all(|u| {
            for t in 0..h {
                ds[t] = (adj[t][u] & bits).count_ones();
            }
            brute_force_msd(&ds, l).unwrap().density >= delta
        });
        if dense {
            valid.push(bits);
        }
    }
    let best = valid.iter().copied().max_by_key(|b| b.count_ones()).unwrap_or(0);
    for &b in &valid {
        assert_eq!(b & !best, 0, "a dense set escapes the largest one");
    }
    (0..n as u32).filter(|i| best >> i & 1 == 1).map(NodeId).collect()
}

/// Every density a window of length in `[l, horizon]` can take on `g`.
pub fn attainable_densities(g: &TemporalGraph, l: usize) -> Vec<Density> {
    let max_deg = g.nodes().map(|u| g.detemporal_degree(u)).max().unwrap_or(0) as u64;
    let mut out = Vec::new();
    for den in l as u64..=g.horizon() as u64 {
        for num in 1..=max_deg * den {
            out.push(Density::new(num, den).reduced());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Largest attainable `delta` with a nonempty core, found by binary search
/// over the sorted attainable values with `nonempty` as the probe.
pub fn threshold_sweep<F: Fn(Density) -> bool>(candidates: &[Density], nonempty: F) -> Option<Density> {
    let (mut lo, mut hi) = (0usize, candidates.len());
    // invariant: candidates[..lo] nonempty, candidates[hi..] empty
    while lo < hi {
        let mid = (lo + hi) / 2;
        if nonempty(candidates[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo.checked_sub(1).map(|i| candidates[i])
}

/// Frontier by brute force: the best `delta` for every `l`, dominated points
/// removed.
pub fn exhaustive_frontier(g: &TemporalGraph) -> Vec<(usize, Density, Vec<NodeId>)> {
    let mut best = Vec::new();
    for l in 2..=g.horizon() {
        let cands = attainable_densities(g, l);
        let d = threshold_sweep(&cands, |d| !burstcore::mdc_baseline(g, l, d).unwrap().is_empty());
        if let Some(d) = d {
            best.push((l, d));
        }
    }
    let mut out = Vec::new();
    for (i, &(l, d)) in best.iter().enumerate() {
        let dominated = best[i + 1..].iter().any(|&(_, d2)| d2 >= d);
        if !dominated {
            let nodes = burstcore::mdc_baseline(g, l, d).unwrap().nodes;
            out.push((l, d, nodes));
        }
    }
    out
}

pub fn mask_of(g: &TemporalGraph, nodes: &[NodeId]) -> NodeMask {
    NodeMask::from_nodes(g.n(), nodes.iter().copied())
}

pub const DELTAS: [(u64, u64); 4] = [(1, 1), (3, 2), (2, 1), (3, 1)];
