//! Maximum l-segment density of a degree sequence.
//!
//! Timestamps are 1-based: `values[t - 1]` is the degree at snapshot `t`, and
//! a window `[ts, te]` covers snapshots `ts..=te`. On the cumulative curve
//! `csc` (with `csc[0] = 0`) the density of `[a + 1, b]` is the chord slope
//! `(csc[b] - csc[a]) / (b - a)`.

use std::cell::RefCell;

use serde::Serialize;

use crate::density::Density;
use crate::error::{Error, Result};

/// Best density together with its canonical window (smallest start, then
/// smallest end among the windows attaining it).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Msd {
    pub density: Density,
    pub window: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumCurve {
    csc: Vec<u64>,
}

impl CumCurve {
    pub fn new(values: &[u32]) -> CumCurve {
        let mut csc = Vec::with_capacity(values.len() + 1);
        let mut acc = 0u64;
        csc.push(0);
        for &v in values {
            acc += v as u64;
            csc.push(acc);
        }
        CumCurve { csc }
    }

    pub fn points(&self) -> &[u64] {
        &self.csc
    }

    pub fn horizon(&self) -> usize {
        self.csc.len() - 1
    }

    #[inline]
    pub fn slope(&self, a: usize, b: usize) -> Density {
        debug_assert!(a < b);
        Density::new(self.csc[b] - self.csc[a], (b - a) as u64)
    }
}

fn check_window(l: usize, horizon: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidParameter("l must be positive".into()));
    }
    if l > horizon {
        return Err(Error::WindowTooLong { l, horizon });
    }
    Ok(())
}

/// Enumerates every window of length at least `l`.
pub fn brute_force_msd(values: &[u32], l: usize) -> Result<Msd> {
    check_window(l, values.len())?;
    let curve = CumCurve::new(values);
    let horizon = values.len();
    let mut best = Msd {
        density: curve.slope(0, l),
        window: (1, l),
    };
    for ts in 1..=horizon {
        for te in (ts + l - 1)..=horizon {
            let d = curve.slope(ts - 1, te);
            if d > best.density {
                best = Msd {
                    density: d,
                    window: (ts, te),
                };
            }
        }
    }
    Ok(best)
}

/// Same as [`brute_force_msd`] but only over window lengths in `[l, max_len]`.
pub fn brute_force_msd_bounded(values: &[u32], l: usize, max_len: usize) -> Result<Msd> {
    check_window(l, values.len())?;
    let curve = CumCurve::new(values);
    let horizon = values.len();
    let mut best = Msd {
        density: curve.slope(0, l),
        window: (1, l),
    };
    for ts in 1..=horizon {
        let last = (ts + max_len - 1).min(horizon);
        for te in (ts + l - 1)..=last {
            let d = curve.slope(ts - 1, te);
            if d > best.density {
                best = Msd {
                    density: d,
                    window: (ts, te),
                };
            }
        }
    }
    Ok(best)
}

/// The lower-hull window of the sweep: live entries are `ch[i_s..=i_e]`.
#[derive(Clone, Debug, Default)]
pub struct HullWindow {
    pub ch: Vec<usize>,
    pub i_s: usize,
}

impl HullWindow {
    pub fn live(&self) -> &[usize] {
        &self.ch[self.i_s..]
    }

    /// Index of the last live entry; only meaningful when the window is nonempty.
    pub fn i_e(&self) -> usize {
        self.ch.len() - 1
    }
}

/// Sweeps `j = l..=horizon` with a monotone head cursor over a lower convex
/// hull, calling `observe(j, hull, curve, tangent_slope)` after each step.
/// Returns the maximum tangent slope seen.
pub fn hull_sweep<F>(values: &[u32], l: usize, mut observe: F) -> Result<Density>
where
    F: FnMut(usize, &HullWindow, &CumCurve, Density),
{
    check_window(l, values.len())?;
    let curve = CumCurve::new(values);
    let mut hull = HullWindow {
        ch: Vec::with_capacity(values.len()),
        i_s: 0,
    };
    let mut best = Density::ZERO;
    for j in l..=values.len() {
        let p = j - l;
        while hull.ch.len() >= hull.i_s + 2 {
            let e = hull.ch.len() - 1;
            if curve.slope(hull.ch[e], p) <= curve.slope(hull.ch[e - 1], hull.ch[e]) {
                hull.ch.pop();
            } else {
                break;
            }
        }
        hull.ch.push(p);
        while hull.i_s + 1 < hull.ch.len()
            && curve.slope(hull.ch[hull.i_s], j)
                >= curve.slope(hull.ch[hull.i_s], hull.ch[hull.i_s + 1])
        {
            hull.i_s += 1;
        }
        let slope = curve.slope(hull.ch[hull.i_s], j);
        if slope > best {
            best = slope;
        }
        observe(j, &hull, &curve, slope);
    }
    Ok(best)
}

/// Maximum l-segment density by the hull sweep, value only.
pub fn max_segment_density(values: &[u32], l: usize) -> Result<Density> {
    hull_sweep(values, l, |_, _, _, _| {})
}

/// Exact test of whether some window of length at least `l` has density at
/// least `delta` (or above it when `strict`), without computing the maximum.
/// Linear time, integer arithmetic only.
pub fn reaches(values: &[u32], l: usize, delta: Density, strict: bool) -> bool {
    if l == 0 || l > values.len() {
        return false;
    }
    if delta.den > u32::MAX as u64 {
        let best = max_segment_density(values, l).expect("l checked");
        return if strict { best > delta } else { best >= delta };
    }
    let (num, den) = (delta.num as i128, delta.den as i128);
    // prefix sums of den * ds - num; a window [a + 1, b] qualifies when
    // prefix[b] - prefix[a] is >= 0 (or > 0)
    let mut prefix = 0i128;
    let mut lagged = 0i128;
    let mut lowest = i128::MAX;
    for (i, &v) in values.iter().enumerate() {
        if i >= l {
            lagged += den * values[i - l] as i128 - num;
        }
        if i + 1 >= l {
            lowest = lowest.min(lagged);
        }
        prefix += den * v as i128 - num;
        if i + 1 >= l && (prefix > lowest || (!strict && prefix == lowest)) {
            return true;
        }
    }
    false
}

/// Smallest-start, then smallest-end window of length at least `l` whose
/// density equals `target`, where `target` is the maximum. Linear time.
pub fn canonical_window(values: &[u32], l: usize, target: Density) -> Option<(usize, usize)> {
    let horizon = values.len();
    if l == 0 || l > horizon {
        return None;
    }
    let (num, den) = (target.num as i128, target.den as i128);
    // prefix[i] = sum over the first i snapshots of (den * ds - num)
    let mut prefix = Vec::with_capacity(horizon + 1);
    prefix.push(0i128);
    for &v in values {
        let last = *prefix.last().unwrap();
        prefix.push(last + den * v as i128 - num);
    }
    let mut sufmax = prefix.clone();
    for i in (0..horizon).rev() {
        sufmax[i] = sufmax[i].max(sufmax[i + 1]);
    }
    for ts in 1..=(horizon + 1 - l) {
        let base = prefix[ts - 1];
        if sufmax[ts + l - 1] >= base {
            let te = (ts + l - 1..=horizon).find(|&k| prefix[k] >= base)?;
            return Some((ts, te));
        }
    }
    None
}

/// Per-end-time best densities for one node, maintainable under decrements.
///
/// Cell `j` holds the best density over windows ending at `j` whose start
/// point lies in `[anchor(j), j - l]`, with `anchor(j) = max(0, l*floor(j/l) - 2l)`.
/// That range always covers `[j - 2l, j - l]`, so the maximum over cells is
/// the true maximum, and a decrement at `t` only touches cells whose anchor
/// precedes `t`: a constant number of blocks of length `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtsCache {
    l: usize,
    horizon: usize,
    /// `cells[j - l]` for `j in l..=horizon`.
    cells: Vec<Density>,
    best: usize,
}

impl MtsCache {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Best stored density for windows ending at `j`.
    pub fn cell(&self, j: usize) -> Density {
        self.cells[j - self.l]
    }

    pub fn best(&self) -> Density {
        self.cells[self.best]
    }

    pub fn heap_bytes(&self) -> usize {
        self.cells.capacity() * std::mem::size_of::<Density>()
    }

    fn anchor(&self, j: usize) -> usize {
        anchor(self.l, j)
    }

    fn rescan(&mut self) {
        let mut best = 0;
        for (i, d) in self.cells.iter().enumerate() {
            if *d > self.cells[best] {
                best = i;
            }
        }
        self.best = best;
    }
}

fn anchor(l: usize, j: usize) -> usize {
    (l * (j / l)).saturating_sub(2 * l)
}

/// Fills `cells[j - l]` for `j in lo..=hi` from a curve. `curve_at(i)` must
/// return the cumulative sum at curve index `i` up to a constant offset.
fn fill_cells<C: Fn(usize) -> u64>(
    l: usize,
    lo: usize,
    hi: usize,
    curve_at: C,
    cells: &mut [Density],
    hull: &mut Vec<usize>,
) {
    let slope = |a: usize, b: usize| Density::new(curve_at(b) - curve_at(a), (b - a) as u64);
    let mut j = lo;
    while j <= hi {
        let block_end = (l * (j / l + 1) - 1).min(hi);
        let a0 = anchor(l, j);
        hull.clear();
        let push = |p: usize, hull: &mut Vec<usize>| {
            while hull.len() >= 2 {
                let e = hull.len() - 1;
                if slope(hull[e], p) <= slope(hull[e - 1], hull[e]) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        };
        for p in a0..j - l {
            push(p, hull);
        }
        for jj in j..=block_end {
            push(jj - l, hull);
            // first hull point whose tangent test fails
            let (mut lo_k, mut hi_k) = (0usize, hull.len() - 1);
            while lo_k < hi_k {
                let mid = (lo_k + hi_k) / 2;
                if slope(hull[mid], jj) >= slope(hull[mid], hull[mid + 1]) {
                    lo_k = mid + 1;
                } else {
                    hi_k = mid;
                }
            }
            cells[jj - l] = slope(hull[lo_k], jj);
        }
        j = block_end + 1;
    }
}

/// Result of [`compute_msd`].
#[derive(Clone, Debug)]
pub struct MsdComputation {
    pub msd: Msd,
    pub cache: MtsCache,
    pub curve: CumCurve,
}

pub fn compute_msd(values: &[u32], l: usize) -> Result<MsdComputation> {
    let cache = build_cache(values, l)?;
    let curve = CumCurve::new(values);
    let density = cache.best();
    let window = canonical_window(values, l, density)
        .ok_or_else(|| Error::InternalState("maximum density has no window".into()))?;
    Ok(MsdComputation {
        msd: Msd { density, window },
        cache,
        curve,
    })
}

/// Builds only the cache; the curve is dropped afterwards.
pub fn build_cache(values: &[u32], l: usize) -> Result<MtsCache> {
    check_window(l, values.len())?;
    let horizon = values.len();
    let curve = CumCurve::new(values);
    let mut cells = vec![Density::ZERO; horizon + 1 - l];
    let mut hull = Vec::with_capacity(3 * l);
    fill_cells(l, l, horizon, |i| curve.csc[i], &mut cells, &mut hull);
    let mut cache = MtsCache {
        l,
        horizon,
        cells,
        best: 0,
    };
    cache.rescan();
    Ok(cache)
}

thread_local! {
    /// Local curve and hull buffers reused across updates.
    static SCRATCH: RefCell<(Vec<u64>, Vec<usize>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

/// Refreshes `cache` after `values[t - 1]` was decremented by one and returns
/// the new maximum. Only cells whose candidate windows straddle `t` change.
pub fn update_msd(values: &[u32], cache: &mut MtsCache, t: usize, l: usize) -> Result<Density> {
    if cache.l != l || cache.horizon != values.len() {
        return Err(Error::InternalState(format!(
            "cache built for l = {}, horizon = {} used with l = {}, horizon = {}",
            cache.l,
            cache.horizon,
            l,
            values.len()
        )));
    }
    if t == 0 || t > values.len() {
        return Err(Error::InternalState(format!(
            "decrement time {t} outside 1..={}",
            values.len()
        )));
    }
    let horizon = values.len();
    let lo = t.max(l);
    let hi = (l * ((t - 1) / l + 3) - 1).min(horizon);
    if lo > hi {
        return Ok(cache.best());
    }
    let base = cache.anchor(lo);
    SCRATCH.with(|scratch| {
        let (local, hull) = &mut *scratch.borrow_mut();
        local.clear();
        let mut acc = 0u64;
        local.push(0);
        for &v in &values[base..hi] {
            acc += v as u64;
            local.push(acc);
        }
        fill_cells(l, lo, hi, |i| local[i - base], &mut cache.cells, hull);
    });
    let best_j = cache.best + l;
    if (lo..=hi).contains(&best_j) {
        cache.rescan();
    }
    Ok(cache.best())
}
