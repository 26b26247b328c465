//! Seeded synthetic temporal graphs: uniform background noise plus planted
//! cliques that flicker on and off inside a window.

use std::collections::HashSet;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::graph::TemporalGraph;

/// A planted clique: `size` members, each member pair present at every
/// snapshot of `start..=end` independently with probability `prob`.
#[derive(Clone, Debug, PartialEq)]
pub struct Burst {
    pub size: usize,
    pub start: u32,
    pub end: u32,
    pub prob: f64,
}

impl FromStr for Burst {
    type Err = Error;

    /// `size:start:end:prob`
    fn from_str(s: &str) -> Result<Burst> {
        let bad = || Error::InvalidParameter(format!("burst must look like size:start:end:prob, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        Ok(Burst {
            size: parts[0].parse().map_err(|_| bad())?,
            start: parts[1].parse().map_err(|_| bad())?,
            end: parts[2].parse().map_err(|_| bad())?,
            prob: parts[3].parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub horizon: u32,
    /// Probability that a given node pair is joined at a given snapshot.
    pub background: f64,
    pub bursts: Vec<Burst>,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
        if self.n < 2 {
            return Err(Error::InvalidParameter("need at least two nodes".into()));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be positive".into()));
        }
        if !prob_ok(self.background) {
            return Err(Error::InvalidParameter(format!(
                "background probability {} outside [0, 1]",
                self.background
            )));
        }
        let mut members = 0;
        for b in &self.bursts {
            if !prob_ok(b.prob) {
                return Err(Error::InvalidParameter(format!("burst probability {} outside [0, 1]", b.prob)));
            }
            if b.start == 0 || b.start > b.end || b.end > self.horizon {
                return Err(Error::InvalidParameter(format!(
                    "burst window [{}, {}] not within 1..={}",
                    b.start, b.end, self.horizon
                )));
            }
            if b.size < 2 {
                return Err(Error::InvalidParameter("a burst needs at least two members".into()));
            }
            members += b.size;
        }
        if members > self.n {
            return Err(Error::InvalidParameter(format!(
                "bursts need {members} distinct members but only {} nodes exist",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub n: usize,
    /// `(u, v, t)` with `u < v`, sorted, duplicate free.
    pub edges: Vec<(u32, u32, u32)>,
    /// Member ids of each burst, sorted.
    pub planted: Vec<Vec<u32>>,
}

pub fn generate(config: &GenConfig) -> Result<Generated> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n as u64;
    let pairs = n * (n - 1) / 2;
    let mut edges = Vec::new();

    let mut order: Vec<u32> = (0..config.n as u32).collect();
    order.shuffle(&mut rng);
    let mut planted = Vec::new();
    let mut next = 0;
    for b in &config.bursts {
        let mut members = order[next..next + b.size].to_vec();
        next += b.size;
        members.sort_unstable();
        for t in b.start..=b.end {
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    if rng.random_bool(b.prob) {
                        edges.push((u, v, t));
                    }
                }
            }
        }
        planted.push(members);
    }

    if config.background > 0.0 {
        let binomial = Binomial::new(pairs, config.background)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for t in 1..=config.horizon {
            if config.background > 0.25 {
                for u in 0..config.n as u32 {
                    for v in u + 1..config.n as u32 {
                        if rng.random_bool(config.background) {
                            edges.push((u, v, t));
                        }
                    }
                }
                continue;
            }
            let count = binomial.sample(&mut rng);
            let mut seen = HashSet::with_capacity(count as usize);
            while (seen.len() as u64) < count {
                let u = rng.random_range(0..config.n as u32);
                let v = rng.random_range(0..config.n as u32);
                if u != v && seen.insert((u.min(v), u.max(v))) {
                    edges.push((u.min(v), u.max(v), t));
                }
            }
        }
    }

    edges.sort_unstable_by_key(|&(u, v, t)| (t, u, v));
    edges.dedup();
    Ok(Generated {
        n: config.n,
        edges,
        planted,
    })
}

impl Generated {
    pub fn to_graph(&self) -> Result<TemporalGraph> {
        TemporalGraph::from_triples(self.n, self.edges.iter().copied())
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for &(u, v, t) in &self.edges {
            writeln!(out, "{u} {v} {t}")?;
        }
        Ok(())
    }

    /// One line per burst with its member labels.
    pub fn write_planted<W: Write>(&self, mut out: W) -> Result<()> {
        for members in &self.planted {
            let line: Vec<String> = members.iter().map(|m| m.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
