//! Peeling to the unique (l, delta)-maximal dense core.
//!
//! All three entry points share [`PeelState`]; they differ only in how a
//! node's maximum segment density is obtained:
//!
//! * [`mdc_baseline`] enumerates every window,
//! * [`mdc`] runs the hull sweep eagerly and again after every neighbor loss,
//! * [`mdc_plus`] builds per-node caches on demand and patches them per
//!   removed temporal edge.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::graph::{degree_values, NodeId, NodeMask, SimpleAdjacency, TemporalGraph};
use crate::segment::{
    brute_force_msd, build_cache, compute_msd, max_segment_density, reaches, update_msd, MtsCache,
};

/// Largest node set whose induced simple graph has every degree `>= k`.
pub fn k_core<G: SimpleAdjacency>(g: &G, k: Density) -> NodeMask {
    k_core_within(g, k, &NodeMask::full(g.node_count()))
}

/// [`k_core`] of the subgraph induced by `within`.
pub fn k_core_within<G: SimpleAdjacency>(g: &G, k: Density, within: &NodeMask) -> NodeMask {
    let n = g.node_count();
    let mut alive = within.clone();
    let mut deg = vec![0u64; n];
    let mut stack = Vec::new();
    for u in within.iter() {
        g.for_each_neighbor(u, |w| {
            if within.contains(w) {
                deg[u.index()] += 1;
            }
        });
        if k.exceeds_count(deg[u.index()]) {
            alive.remove(u);
            stack.push(u);
        }
    }
    while let Some(v) = stack.pop() {
        g.for_each_neighbor(v, |w| {
            if alive.contains(w) {
                deg[w.index()] -= 1;
                if k.exceeds_count(deg[w.index()]) {
                    alive.remove(w);
                    stack.push(w);
                }
            }
        });
    }
    alive
}

/// Which density routine a peel uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    /// Window enumeration, recomputed from scratch.
    Baseline,
    /// Hull sweep, recomputed from scratch.
    Sweep,
    /// Lazily built caches with per-edge updates.
    Incremental,
}

/// Order in which pending deletions (and, for [`Algo::Incremental`], seed
/// nodes) are processed. The result never depends on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PeelOrder {
    #[default]
    Fifo,
    Shuffled(u64),
}

/// Keep rule applied to both the degree and the segment density of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    AtLeast(Density),
    Above(Density),
}

impl Threshold {
    #[inline]
    pub fn keeps(self, d: Density) -> bool {
        match self {
            Threshold::AtLeast(t) => d >= t,
            Threshold::Above(t) => d > t,
        }
    }

    #[inline]
    pub fn keeps_degree(self, deg: u32) -> bool {
        match self {
            Threshold::AtLeast(t) => !t.exceeds_count(deg as u64),
            Threshold::Above(t) => Density::integer(deg as u64) > t,
        }
    }
}

enum WorkQueue {
    Fifo(VecDeque<NodeId>),
    Shuffled { items: Vec<NodeId>, rng: ChaCha8Rng },
}

impl WorkQueue {
    fn new(order: PeelOrder) -> WorkQueue {
        match order {
            PeelOrder::Fifo => WorkQueue::Fifo(VecDeque::new()),
            PeelOrder::Shuffled(seed) => WorkQueue::Shuffled {
                items: Vec::new(),
                rng: ChaCha8Rng::seed_from_u64(seed),
            },
        }
    }

    fn push(&mut self, u: NodeId) {
        match self {
            WorkQueue::Fifo(q) => q.push_back(u),
            WorkQueue::Shuffled { items, .. } => items.push(u),
        }
    }

    fn pop(&mut self) -> Option<NodeId> {
        match self {
            WorkQueue::Fifo(q) => q.pop_front(),
            WorkQueue::Shuffled { items, rng } => {
                if items.is_empty() {
                    None
                } else {
                    let i = rng.random_range(0..items.len());
                    Some(items.swap_remove(i))
                }
            }
        }
    }

    fn shuffle(&mut self, nodes: &mut [NodeId]) {
        if let WorkQueue::Shuffled { rng, .. } = self {
            use rand::seq::SliceRandom;
            nodes.shuffle(rng);
        }
    }
}

/// Degree sequence and density cache of one surviving node.
#[derive(Clone, Debug)]
pub struct NodeCache {
    pub ds: Vec<u32>,
    pub mts: MtsCache,
}

/// Mutable peeling state over one temporal graph.
///
/// `alive` holds every node not yet deleted, including the ones waiting in the
/// queue; densities are always computed against it.
pub struct PeelState<'g> {
    g: &'g TemporalGraph,
    l: usize,
    algo: Algo,
    threshold: Threshold,
    alive: NodeMask,
    alive_count: usize,
    deg: Vec<u32>,
    enqueued: Vec<bool>,
    /// Used by the eager algorithms.
    msd: Vec<Option<Density>>,
    /// Used by [`Algo::Incremental`].
    caches: Vec<Option<NodeCache>>,
    queue: WorkQueue,
}

impl<'g> PeelState<'g> {
    pub fn new(
        g: &'g TemporalGraph,
        l: usize,
        within: &NodeMask,
        threshold: Threshold,
        algo: Algo,
        order: PeelOrder,
    ) -> Result<PeelState<'g>> {
        check_params(g, l)?;
        let n = g.n();
        let mut deg = vec![0u32; n];
        for u in within.iter() {
            deg[u.index()] = g
                .neighbor_groups(u)
                .filter(|(w, _)| within.contains(*w))
                .count() as u32;
        }
        let (msd, caches) = match algo {
            Algo::Incremental => (Vec::new(), (0..n).map(|_| None).collect()),
            _ => (vec![None; n], Vec::new()),
        };
        Ok(PeelState {
            g,
            l,
            algo,
            threshold,
            alive: within.clone(),
            alive_count: within.count(),
            deg,
            enqueued: vec![false; n],
            msd,
            caches,
            queue: WorkQueue::new(order),
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn alive(&self) -> &NodeMask {
        &self.alive
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn degree(&self, u: NodeId) -> u32 {
        self.deg[u.index()]
    }

    pub fn is_enqueued(&self, u: NodeId) -> bool {
        self.enqueued[u.index()]
    }

    /// Current density of `u` if one has been computed.
    pub fn msd(&self, u: NodeId) -> Option<Density> {
        match self.algo {
            Algo::Incremental => self.caches[u.index()].as_ref().map(|c| c.mts.best()),
            _ => self.msd[u.index()],
        }
    }

    pub fn cache(&self, u: NodeId) -> Option<&NodeCache> {
        self.caches.get(u.index()).and_then(|c| c.as_ref())
    }

    /// Nodes currently holding a density (cache or value).
    pub fn cached_nodes(&self) -> Vec<NodeId> {
        self.g.nodes().filter(|&u| self.msd(u).is_some()).collect()
    }

    fn fresh_density(&self, u: NodeId) -> Density {
        let ds = degree_values(self.g, u, &self.alive);
        match self.algo {
            Algo::Baseline => brute_force_msd(&ds, self.l).expect("l checked").density,
            _ => max_segment_density(&ds, self.l).expect("l checked"),
        }
    }

    fn fresh_cache(&self, u: NodeId) -> NodeCache {
        let ds = degree_values(self.g, u, &self.alive);
        let mts = build_cache(&ds, self.l).expect("l checked");
        NodeCache { ds, mts }
    }

    /// Computes the density of `u` against the current survivors unless it
    /// is already known, and returns it.
    pub fn ensure_density(&mut self, u: NodeId) -> Density {
        if let Some(d) = self.msd(u) {
            return d;
        }
        match self.algo {
            Algo::Incremental => {
                let cache = self.fresh_cache(u);
                let d = cache.mts.best();
                self.caches[u.index()] = Some(cache);
                d
            }
            _ => {
                let d = self.fresh_density(u);
                self.msd[u.index()] = Some(d);
                d
            }
        }
    }

    /// Computes densities for every live node lacking one, in parallel.
    pub fn prime_all(&mut self) {
        let missing: Vec<NodeId> = self
            .alive
            .iter()
            .filter(|&u| self.msd(u).is_none())
            .collect();
        match self.algo {
            Algo::Incremental => {
                let built: Vec<(NodeId, NodeCache)> = missing
                    .par_iter()
                    .map(|&u| (u, self.fresh_cache(u)))
                    .collect();
                for (u, c) in built {
                    self.caches[u.index()] = Some(c);
                }
            }
            _ => {
                let built: Vec<(NodeId, Density)> = missing
                    .par_iter()
                    .map(|&u| (u, self.fresh_density(u)))
                    .collect();
                for (u, d) in built {
                    self.msd[u.index()] = Some(d);
                }
            }
        }
    }

    fn violates(&self, u: NodeId) -> bool {
        if !self.threshold.keeps_degree(self.deg[u.index()]) {
            return true;
        }
        match self.msd(u) {
            Some(d) => !self.threshold.keeps(d),
            None => false,
        }
    }

    pub fn enqueue(&mut self, u: NodeId) {
        if self.alive.contains(u) && !self.enqueued[u.index()] {
            self.enqueued[u.index()] = true;
            self.queue.push(u);
        }
    }

    /// Enqueues `u` if it breaks the current threshold. Returns whether it did.
    pub fn check(&mut self, u: NodeId) -> bool {
        if self.alive.contains(u) && !self.enqueued[u.index()] && self.violates(u) {
            self.enqueue(u);
            true
        } else {
            false
        }
    }

    /// Replaces the threshold and enqueues every live node that now fails it.
    pub fn set_threshold(&mut self, threshold: Threshold) {
        self.threshold = threshold;
        let live: Vec<NodeId> = self.alive.iter().collect();
        for u in live {
            self.check(u);
        }
    }

    /// Deletes queued nodes until the queue is empty.
    pub fn drain(&mut self) {
        while let Some(v) = self.queue.pop() {
            self.delete(v);
        }
    }

    fn delete(&mut self, v: NodeId) {
        self.alive.remove(v);
        self.alive_count -= 1;
        self.enqueued[v.index()] = false;
        match self.algo {
            Algo::Incremental => self.caches[v.index()] = None,
            _ => self.msd[v.index()] = None,
        }
        let g = self.g;
        for (w, times) in g.neighbor_groups(v) {
            if !self.alive.contains(w) {
                continue;
            }
            self.deg[w.index()] -= 1;
            if self.enqueued[w.index()] {
                continue;
            }
            if !self.threshold.keeps_degree(self.deg[w.index()]) {
                self.enqueue(w);
                continue;
            }
            match self.algo {
                Algo::Incremental => {
                    let l = self.l;
                    if let Some(cache) = self.caches[w.index()].as_mut() {
                        for &t in times {
                            cache.ds[t as usize - 1] -= 1;
                            update_msd(&cache.ds, &mut cache.mts, t as usize, l)
                                .expect("cache matches its sequence");
                        }
                    } else {
                        continue;
                    }
                }
                _ => {
                    if self.msd[w.index()].is_some() {
                        let d = self.fresh_density(w);
                        self.msd[w.index()] = Some(d);
                    } else {
                        continue;
                    }
                }
            }
            self.check(w);
        }
    }

    /// Live nodes in increasing id order.
    pub fn survivors(&self) -> Vec<NodeId> {
        self.alive.to_vec()
    }

    /// Seeds every live node lazily in increasing `(degree, id)` order (or a
    /// shuffled order), draining the queue after each seed.
    pub fn run_lazy(&mut self) {
        let mut seeds: Vec<NodeId> = self.alive.iter().collect();
        seeds.sort_by_key(|&u| (self.deg[u.index()], u));
        self.queue.shuffle(&mut seeds);
        for u in seeds {
            if !self.alive.contains(u) || self.enqueued[u.index()] {
                continue;
            }
            if self.msd(u).is_none() && self.algo == Algo::Incremental {
                // a seed that cannot reach the threshold is queued without
                // ever building its cache
                let ds = degree_values(self.g, u, &self.alive);
                let (delta, strict) = match self.threshold {
                    Threshold::AtLeast(d) => (d, false),
                    Threshold::Above(d) => (d, true),
                };
                if !reaches(&ds, self.l, delta, strict) {
                    self.enqueue(u);
                } else {
                    let mts = build_cache(&ds, self.l).expect("l checked");
                    self.caches[u.index()] = Some(NodeCache { ds, mts });
                    self.check(u);
                }
            } else {
                self.ensure_density(u);
                self.check(u);
            }
            self.drain();
        }
    }

    /// Computes every density up front, enqueues violators, then drains.
    pub fn run_eager(&mut self) {
        self.prime_all();
        let mut live: Vec<NodeId> = self.alive.iter().collect();
        self.queue.shuffle(&mut live);
        for u in live {
            self.check(u);
        }
        self.drain();
    }
}

fn check_params(g: &TemporalGraph, l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("l must be at least 2, got {l}")));
    }
    if l > g.horizon() {
        return Err(Error::WindowTooLong {
            l,
            horizon: g.horizon(),
        });
    }
    Ok(())
}

fn check_delta(delta: Density) -> Result<()> {
    if delta.is_zero() {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    Ok(())
}

/// A member of a core with the window that certifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub node: NodeId,
    pub window: (usize, usize),
    pub density: Density,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdcResult {
    pub l: usize,
    pub delta: Density,
    /// Sorted by id.
    pub nodes: Vec<NodeId>,
    /// One per node, in the same order.
    pub witnesses: Vec<Witness>,
}

impl MdcResult {
    /// Builds the result for a final node set, computing each witness against
    /// that set.
    pub fn from_nodes(g: &TemporalGraph, l: usize, delta: Density, nodes: Vec<NodeId>) -> Result<MdcResult> {
        let mask = NodeMask::from_nodes(g.n(), nodes.iter().copied());
        let witnesses = nodes
            .par_iter()
            .map(|&u| {
                let ds = degree_values(g, u, &mask);
                compute_msd(&ds, l).map(|c| Witness {
                    node: u,
                    window: c.msd.window,
                    density: c.msd.density,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MdcResult {
            l,
            delta,
            nodes,
            witnesses,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mask(&self, n: usize) -> NodeMask {
        NodeMask::from_nodes(n, self.nodes.iter().copied())
    }

    /// Checks that every member has degree at least `delta` inside the set
    /// and a witness window of length at least `l` and density at least
    /// `delta`, recomputed from the graph.
    pub fn verify(&self, g: &TemporalGraph) -> Result<()> {
        let mask = self.mask(g.n());
        if self.witnesses.len() != self.nodes.len() {
            return Err(Error::InternalState("witness count differs from node count".into()));
        }
        for (u, w) in self.nodes.iter().zip(&self.witnesses) {
            if w.node != *u {
                return Err(Error::InternalState(format!("witness order broken at {u}")));
            }
            let deg = g.neighbor_groups(*u).filter(|(x, _)| mask.contains(*x)).count();
            if self.delta.exceeds_count(deg as u64) {
                return Err(Error::InternalState(format!(
                    "node {u} has degree {deg} below {}",
                    self.delta
                )));
            }
            let (ts, te) = w.window;
            if te < ts || te + 1 - ts < self.l || te > g.horizon() {
                return Err(Error::InternalState(format!("node {u} has a bad window [{ts}, {te}]")));
            }
            let ds = degree_values(g, *u, &mask);
            let sum: u64 = ds[ts - 1..te].iter().map(|&d| d as u64).sum();
            let actual = Density::new(sum, (te + 1 - ts) as u64);
            if actual != w.density || w.density < self.delta {
                return Err(Error::InternalState(format!(
                    "node {u} witness density {} does not certify {}",
                    w.density, self.delta
                )));
            }
        }
        Ok(())
    }
}

/// Core node set for `(l, delta)` with the chosen routine and order.
pub fn mdc_nodes(
    g: &TemporalGraph,
    l: usize,
    delta: Density,
    algo: Algo,
    order: PeelOrder,
) -> Result<Vec<NodeId>> {
    check_params(g, l)?;
    check_delta(delta)?;
    mdc_nodes_within(g, l, delta, algo, order, &NodeMask::full(g.n()))
}

/// As [`mdc_nodes`] but inside the subgraph induced by `within`.
pub fn mdc_nodes_within(
    g: &TemporalGraph,
    l: usize,
    delta: Density,
    algo: Algo,
    order: PeelOrder,
    within: &NodeMask,
) -> Result<Vec<NodeId>> {
    let core = k_core_within(g, delta, within);
    if core.is_empty() {
        return Ok(Vec::new());
    }
    let mut state = PeelState::new(g, l, &core, Threshold::AtLeast(delta), algo, order)?;
    match algo {
        Algo::Incremental => state.run_lazy(),
        _ => state.run_eager(),
    }
    Ok(state.survivors())
}

pub fn mdc_with(g: &TemporalGraph, l: usize, delta: Density, algo: Algo, order: PeelOrder) -> Result<MdcResult> {
    let nodes = mdc_nodes(g, l, delta, algo, order)?;
    MdcResult::from_nodes(g, l, delta, nodes)
}

/// Peeling with window enumeration for every density check.
pub fn mdc_baseline(g: &TemporalGraph, l: usize, delta: Density) -> Result<MdcResult> {
    mdc_with(g, l, delta, Algo::Baseline, PeelOrder::Fifo)
}

/// Peeling with the hull sweep, recomputed after every neighbor loss.
pub fn mdc(g: &TemporalGraph, l: usize, delta: Density) -> Result<MdcResult> {
    mdc_with(g, l, delta, Algo::Sweep, PeelOrder::Fifo)
}

/// Lazy, incrementally maintained peeling.
pub fn mdc_plus(g: &TemporalGraph, l: usize, delta: Density) -> Result<MdcResult> {
    mdc_with(g, l, delta, Algo::Incremental, PeelOrder::Fifo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::detemporal;

    fn clique_with_pendant() -> TemporalGraph {
        let mut edges = Vec::new();
        for t in 1..=3 {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((u, v, t));
                }
            }
        }
        edges.push((0, 4, 1));
        TemporalGraph::from_triples(5, edges).unwrap()
    }

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn k_core_triangle_and_path() {
        let tri = TemporalGraph::from_triples(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert_eq!(k_core(&detemporal(&tri), Density::integer(2)).count(), 3);
        let path = TemporalGraph::from_triples(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        assert!(k_core(&detemporal(&path), Density::integer(2)).is_empty());
        // a fractional threshold rounds up against integer degrees
        assert_eq!(k_core(&path, Density::new(3, 2)).count(), 0);
        assert_eq!(k_core(&path, Density::new(1, 2)).count(), 4);
    }

    #[test]
    fn planted_clique_all_algorithms() {
        let g = clique_with_pendant();
        for algo in [Algo::Baseline, Algo::Sweep, Algo::Incremental] {
            let r = mdc_with(&g, 3, Density::integer(3), algo, PeelOrder::Fifo).unwrap();
            assert_eq!(r.nodes, ids(&[0, 1, 2, 3]), "{algo:?}");
            for w in &r.witnesses {
                assert_eq!(w.window, (1, 3));
                assert_eq!(w.density, Density::integer(3));
            }
            r.verify(&g).unwrap();
        }
    }

    #[test]
    fn unreachable_threshold_is_empty() {
        let g = clique_with_pendant();
        for algo in [Algo::Baseline, Algo::Sweep, Algo::Incremental] {
            let r = mdc_with(&g, 3, Density::integer(4), algo, PeelOrder::Fifo).unwrap();
            assert!(r.is_empty());
            assert!(r.witnesses.is_empty());
        }
    }

    #[test]
    fn cascade_to_empty() {
        // a path: the first deletion takes everything with it
        let g = TemporalGraph::from_triples(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 1, 2)]).unwrap();
        let plus = mdc_plus(&g, 2, Density::integer(1)).unwrap();
        let sweep = mdc(&g, 2, Density::integer(1)).unwrap();
        assert_eq!(plus.nodes, sweep.nodes);
        assert_eq!(plus.nodes, ids(&[0, 1]));
        let r = mdc_plus(&g, 2, Density::new(3, 2)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn low_threshold_matches_baseline() {
        let g = clique_with_pendant();
        let half = Density::new(1, 2);
        let b = mdc_baseline(&g, 2, half).unwrap();
        assert_eq!(b.nodes, mdc_plus(&g, 2, half).unwrap().nodes);
        assert_eq!(b.nodes.len(), 5);
    }

    #[test]
    fn invalid_parameters() {
        let g = clique_with_pendant();
        assert!(matches!(mdc(&g, 1, Density::integer(1)), Err(Error::InvalidParameter(_))));
        assert!(matches!(mdc(&g, 4, Density::integer(1)), Err(Error::WindowTooLong { .. })));
        assert!(matches!(mdc(&g, 2, Density::ZERO), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn caches_released_after_peel() {
        let g = clique_with_pendant();
        let core = k_core(&g, Density::integer(3));
        let mut state = PeelState::new(
            &g,
            3,
            &core,
            Threshold::AtLeast(Density::new(7, 2)),
            Algo::Incremental,
            PeelOrder::Fifo,
        )
        .unwrap();
        state.run_lazy();
        assert!(state.survivors().is_empty());
        assert!(state.cached_nodes().is_empty());
    }

    #[test]
    fn shuffled_orders_agree() {
        let g = clique_with_pendant();
        for seed in 0..10 {
            for algo in [Algo::Sweep, Algo::Incremental] {
                let nodes = mdc_nodes(&g, 2, Density::integer(3), algo, PeelOrder::Shuffled(seed)).unwrap();
                assert_eq!(nodes, ids(&[0, 1, 2, 3]));
            }
        }
    }

    #[test]
    fn verify_rejects_tampered_result() {
        let g = clique_with_pendant();
        let mut r = mdc_plus(&g, 3, Density::integer(3)).unwrap();
        r.witnesses[0].window = (1, 2);
        assert!(r.verify(&g).is_err());
    }
}
