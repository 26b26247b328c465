//! The Pareto frontier of cores over `(l, delta)`.
//!
//! A frontier point is a core for which no other core has both a window
//! length at least as long and a density threshold at least as high. The
//! sweep alternates between maximizing `delta` at a fixed `l` and then
//! maximizing `l` at that `delta`.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeMask, TemporalGraph};
use crate::mining::{k_core, Algo, PeelOrder, PeelState, Threshold};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParetoPoint {
    pub l: usize,
    /// Reduced.
    pub delta: Density,
    /// Sorted by id.
    pub nodes: Vec<NodeId>,
}

/// Largest `delta` for which the `(l, delta)` core inside `candidates` is
/// nonempty, with that core.
pub fn max_delta(g: &TemporalGraph, l: usize, candidates: &NodeMask) -> Result<(Density, NodeMask)> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut state = PeelState::new(
        g,
        l,
        candidates,
        Threshold::AtLeast(Density::ZERO),
        Algo::Incremental,
        PeelOrder::Fifo,
    )?;
    state.prime_all();
    max_delta_primed(&mut state)
}

/// Runs the rounds of [`max_delta`] on a state whose live nodes all carry
/// caches. Each round peels everything at or below the current minimum
/// density; the last nonempty set wins.
pub(crate) fn max_delta_primed(state: &mut PeelState<'_>) -> Result<(Density, NodeMask)> {
    if state.alive_count() == 0 {
        return Err(Error::EmptyCandidates);
    }
    loop {
        let mut lowest: Option<Density> = None;
        let mut has_higher = false;
        for u in state.alive().iter() {
            let d = state
                .msd(u)
                .ok_or_else(|| Error::InternalState(format!("node {u} has no cache")))?;
            match lowest {
                None => lowest = Some(d),
                Some(m) if d < m => {
                    lowest = Some(d);
                    has_higher = true;
                }
                Some(m) if d > m => has_higher = true,
                _ => {}
            }
        }
        let lowest = lowest.expect("nonempty");
        if !has_higher {
            return Ok((lowest.reduced(), state.alive().clone()));
        }
        let before = state.alive().clone();
        state.set_threshold(Threshold::Above(lowest));
        state.drain();
        if state.alive_count() == 0 {
            return Ok((lowest.reduced(), before));
        }
    }
}

/// Largest `l` in `l_start..=horizon` for which the `(l, delta)` core inside
/// `candidates` is nonempty, with that core. When `l_start` itself fails (or
/// exceeds the horizon) the answer is `(l_start - 1, candidates)`.
pub fn max_l(
    g: &TemporalGraph,
    l_start: usize,
    delta: Density,
    candidates: &NodeMask,
) -> Result<(usize, NodeMask)> {
    if l_start < 2 {
        return Err(Error::InvalidParameter(format!("l must be at least 2, got {l_start}")));
    }
    let mut best = (l_start - 1, candidates.clone());
    for l in l_start..=g.horizon() {
        let mut state = PeelState::new(
            g,
            l,
            &best.1,
            Threshold::AtLeast(delta),
            Algo::Incremental,
            PeelOrder::Fifo,
        )?;
        state.run_lazy();
        if state.alive_count() == 0 {
            break;
        }
        best = (l, state.alive().clone());
    }
    Ok(best)
}

/// Frontier with candidates shrunk to a k-core after every point.
pub fn pomdc(g: &TemporalGraph) -> Result<Vec<ParetoPoint>> {
    frontier(g, true)
}

/// Frontier recomputed over all nodes at every step.
pub fn pomdc_baseline(g: &TemporalGraph) -> Result<Vec<ParetoPoint>> {
    frontier(g, false)
}

fn frontier(g: &TemporalGraph, prune: bool) -> Result<Vec<ParetoPoint>> {
    let everyone = NodeMask::full(g.n());
    let mut points = Vec::new();
    let mut candidates = everyone.clone();
    let mut l = 2;
    while l <= g.horizon() && !candidates.is_empty() {
        let mut state = PeelState::new(
            g,
            l,
            &candidates,
            Threshold::AtLeast(Density::ZERO),
            Algo::Incremental,
            PeelOrder::Fifo,
        )?;
        state.prime_all();
        let (delta, core) = max_delta_primed(&mut state)?;
        drop(state);
        if delta.is_zero() {
            break;
        }
        let (l_final, core) = max_l(g, l + 1, delta, &core)?;
        log::debug!("frontier point l = {l_final}, delta = {delta}, size = {}", core.count());
        points.push(ParetoPoint {
            l: l_final,
            delta,
            nodes: core.to_vec(),
        });
        candidates = if prune {
            k_core(g, delta.scaled(l_final as u64, l_final as u64 + 1))
        } else {
            everyone.clone()
        };
        l = l_final + 1;
    }
    Ok(points)
}
