//! Temporal graph storage, edge-list ingestion and the de-temporal projection.
//!
//! Nodes are remapped to dense ids at load time. Each node keeps a CSR slice
//! of `(neighbor, t)` pairs sorted by neighbor and then by time, so the pairs
//! shared with one neighbor form a contiguous run.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Boolean membership mask over the node ids of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMask {
    bits: Vec<bool>,
}

impl NodeMask {
    pub fn empty(n: usize) -> NodeMask {
        NodeMask {
            bits: vec![false; n],
        }
    }

    pub fn full(n: usize) -> NodeMask {
        NodeMask {
            bits: vec![true; n],
        }
    }

    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(n: usize, nodes: I) -> NodeMask {
        let mut mask = NodeMask::empty(n);
        for u in nodes {
            mask.insert(u);
        }
        mask
    }

    #[inline]
    pub fn contains(&self, u: NodeId) -> bool {
        self.bits[u.index()]
    }

    #[inline]
    pub fn insert(&mut self, u: NodeId) {
        self.bits[u.index()] = true;
    }

    #[inline]
    pub fn remove(&mut self, u: NodeId) {
        self.bits[u.index()] = false;
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Members in increasing id order.
    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }

    pub fn is_subset_of(&self, other: &NodeMask) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(&a, &b)| !a || b)
    }
}

/// How raw integer timestamps are grouped into snapshot indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BucketWidth {
    /// Timestamps already form an arithmetic sequence; consecutive multiples
    /// of the common step become consecutive snapshots, gaps included.
    Raw,
    /// `floor((t - t_min) / width) + 1`.
    Width(u64),
}

impl FromStr for BucketWidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("raw") {
            return Ok(BucketWidth::Raw);
        }
        match s.parse::<u64>() {
            Ok(w) if w > 0 => Ok(BucketWidth::Width(w)),
            _ => Err(Error::InvalidParameter(format!(
                "bucket width must be \"raw\" or a positive integer, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IngestStats {
    /// Lines holding an edge record, before any filtering.
    pub records: usize,
    pub comments: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub edges: usize,
}

/// Output of [`parse_edge_list`]: interned labels and normalized triples.
#[derive(Clone, Debug)]
pub struct ParsedEdges {
    pub labels: Vec<String>,
    /// `(u, v, t)` with `u < v`, `t >= 1`, sorted and duplicate free.
    pub triples: Vec<(NodeId, NodeId, u32)>,
    pub stats: IngestStats,
}

pub fn parse_edge_list<R: BufRead>(reader: R, width: BucketWidth) -> Result<ParsedEdges> {
    let mut interner: HashMap<String, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut raw: Vec<(u32, u32, i64)> = Vec::new();
    let mut stats = IngestStats::default();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> u32 {
        if let Some(&id) = interner.get(label) {
            return id;
        }
        let id = labels.len() as u32;
        labels.push(label.to_owned());
        interner.insert(label.to_owned(), id);
        id
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            if line.trim_start().starts_with('#') {
                stats.comments += 1;
            }
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected \"u v t\", found {} fields", fields.len()),
            });
        }
        let t: i64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("timestamp {:?} is not an integer", fields[2]),
        })?;
        stats.records += 1;
        if fields[0] == fields[1] {
            stats.self_loops += 1;
            continue;
        }
        let u = intern(fields[0], &mut labels);
        let v = intern(fields[1], &mut labels);
        raw.push((u.min(v), u.max(v), t));
    }

    if stats.records == 0 {
        return Err(Error::NoEdges);
    }

    let t_min = raw.iter().map(|&(_, _, t)| t).min().unwrap_or(0);
    let step: u128 = match width {
        BucketWidth::Width(w) => w as u128,
        BucketWidth::Raw => {
            let g = raw.iter().fold(0u128, |g, &(_, _, t)| {
                gcd_u128(g, (t as i128 - t_min as i128) as u128)
            });
            g.max(1)
        }
    };

    let mut triples = Vec::with_capacity(raw.len());
    for &(u, v, t) in &raw {
        let bucket = (t as i128 - t_min as i128) as u128 / step + 1;
        let bucket = u32::try_from(bucket).map_err(|_| {
            Error::InvalidParameter(format!(
                "snapshot index {bucket} does not fit in 32 bits; use a wider bucket"
            ))
        })?;
        triples.push((NodeId(u), NodeId(v), bucket));
    }
    triples.sort_unstable();
    let before = triples.len();
    triples.dedup();
    stats.duplicates = before - triples.len();
    stats.edges = triples.len();

    Ok(ParsedEdges {
        labels,
        triples,
        stats,
    })
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Immutable snapshot-indexed undirected multigraph over timestamps
/// `1..=horizon`.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    horizon: usize,
    m: usize,
    offsets: Vec<usize>,
    nbrs: Vec<u32>,
    times: Vec<u32>,
    detemporal_degree: Vec<u32>,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
}

pub fn build_graph(parsed: ParsedEdges) -> Result<TemporalGraph> {
    TemporalGraph::assemble(parsed.labels, parsed.triples)
}

impl TemporalGraph {
    /// Builds a graph over nodes `0..n` labelled by their decimal ids.
    /// Self-loops are dropped and repeated `(u, v, t)` collapsed, as in
    /// [`parse_edge_list`]. Every `t` must be at least 1.
    pub fn from_triples<I>(n: usize, triples: I) -> Result<TemporalGraph>
    where
        I: IntoIterator<Item = (u32, u32, u32)>,
    {
        let mut norm = Vec::new();
        for (u, v, t) in triples {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}, {t}) references a node outside 0..{n}"
                )));
            }
            if t == 0 {
                return Err(Error::InvalidParameter(
                    "timestamps are 1-based".to_string(),
                ));
            }
            if u != v {
                norm.push((NodeId(u.min(v)), NodeId(u.max(v)), t));
            }
        }
        norm.sort_unstable();
        norm.dedup();
        let labels = (0..n).map(|i| i.to_string()).collect();
        TemporalGraph::assemble(labels, norm)
    }

    fn assemble(labels: Vec<String>, triples: Vec<(NodeId, NodeId, u32)>) -> Result<TemporalGraph> {
        if triples.is_empty() {
            return Err(Error::NoEdges);
        }
        let n = labels.len();
        let horizon = triples.iter().map(|&(_, _, t)| t).max().unwrap_or(0) as usize;

        let mut counts = vec![0usize; n + 1];
        for &(u, v, _) in &triples {
            counts[u.index() + 1] += 1;
            counts[v.index() + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut pairs = vec![(0u32, 0u32); 2 * triples.len()];
        for &(u, v, t) in &triples {
            pairs[cursor[u.index()]] = (v.0, t);
            cursor[u.index()] += 1;
            pairs[cursor[v.index()]] = (u.0, t);
            cursor[v.index()] += 1;
        }
        let mut detemporal_degree = vec![0u32; n];
        for u in 0..n {
            let slice = &mut pairs[offsets[u]..offsets[u + 1]];
            slice.sort_unstable();
            let mut distinct = 0;
            let mut prev = None;
            for &(w, _) in slice.iter() {
                if prev != Some(w) {
                    distinct += 1;
                    prev = Some(w);
                }
            }
            detemporal_degree[u] = distinct;
        }
        let (nbrs, times): (Vec<u32>, Vec<u32>) = pairs.into_iter().unzip();
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId(i as u32)))
            .collect();

        Ok(TemporalGraph {
            horizon,
            m: triples.len(),
            offsets,
            nbrs,
            times,
            detemporal_degree,
            labels,
            label_index,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of temporal edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n() as u32).map(NodeId)
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u.index()]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// Raw `(neighbors, times)` slices of `u`, sorted by `(neighbor, t)`.
    pub fn adjacency(&self, u: NodeId) -> (&[u32], &[u32]) {
        let range = self.offsets[u.index()]..self.offsets[u.index() + 1];
        (&self.nbrs[range.clone()], &self.times[range])
    }

    /// Distinct neighbors of `u`, each with the sorted timestamps of the
    /// edges it shares with `u`.
    pub fn neighbor_groups(&self, u: NodeId) -> NeighborGroups<'_> {
        let (nbrs, times) = self.adjacency(u);
        NeighborGroups {
            nbrs,
            times,
            pos: 0,
        }
    }

    /// Number of temporal edges incident to `u`.
    pub fn temporal_degree(&self, u: NodeId) -> usize {
        self.offsets[u.index() + 1] - self.offsets[u.index()]
    }

    pub fn detemporal_degree(&self, u: NodeId) -> usize {
        self.detemporal_degree[u.index()] as usize
    }

    /// Each temporal edge once, as `(u, v, t)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u32)> + '_ {
        self.nodes().flat_map(move |u| {
            let (nbrs, times) = self.adjacency(u);
            nbrs.iter()
                .zip(times)
                .filter(move |(&w, _)| w > u.0)
                .map(move |(&w, &t)| (u, NodeId(w), t))
        })
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        use std::mem::size_of;
        let labels: usize = self
            .labels
            .iter()
            .map(|l| 2 * (l.capacity() + size_of::<String>()))
            .sum();
        self.offsets.capacity() * size_of::<usize>()
            + (self.nbrs.capacity() + self.times.capacity() + self.detemporal_degree.capacity())
                * size_of::<u32>()
            + labels
            + self.label_index.capacity() * size_of::<NodeId>()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n: self.n(),
            m_temporal: self.m,
            m_detemporal: self.detemporal_degree.iter().map(|&d| d as usize).sum::<usize>() / 2,
            horizon: self.horizon,
            d_max: self.detemporal_degree.iter().copied().max().unwrap_or(0) as usize,
        }
    }

    /// Writes the graph back in the `u v t` edge-list format. Timestamps are
    /// snapshot indices, so re-parsing with [`BucketWidth::Width`]`(1)`
    /// reproduces the graph whenever snapshot 1 is occupied.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v, t) in self.edges() {
            writeln!(out, "{} {} {}", self.label(u), self.label(v), t)?;
        }
        Ok(())
    }
}

pub struct NeighborGroups<'a> {
    nbrs: &'a [u32],
    times: &'a [u32],
    pos: usize,
}

impl<'a> Iterator for NeighborGroups<'a> {
    type Item = (NodeId, &'a [u32]);

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos >= self.nbrs.len() {
            return None;
        }
        let start = self.pos;
        let w = self.nbrs[start];
        let mut end = start + 1;
        while end < self.nbrs.len() && self.nbrs[end] == w {
            end += 1;
        }
        self.pos = end;
        Some((NodeId(w), &self.times[start..end]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m_temporal: usize,
    pub m_detemporal: usize,
    pub horizon: usize,
    pub d_max: usize,
}

/// Per-snapshot degree of one node, counted only towards a node subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub owner: NodeId,
    /// `values[t - 1]` is the degree at snapshot `t`.
    pub values: Vec<u32>,
}

impl DegreeSequence {
    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    pub fn total(&self) -> u64 {
        self.values.iter().map(|&d| d as u64).sum()
    }
}

/// `values[t] = |N_u(G_t) ∩ S|` for every snapshot `t`.
pub fn degree_sequence(g: &TemporalGraph, u: NodeId, subset: &NodeMask) -> Result<DegreeSequence> {
    if !subset.contains(u) {
        return Err(Error::NodeNotInSubset(u));
    }
    Ok(DegreeSequence {
        owner: u,
        values: degree_values(g, u, subset),
    })
}

/// Unchecked variant for the peeling loops, which maintain `u ∈ S` themselves.
pub(crate) fn degree_values(g: &TemporalGraph, u: NodeId, subset: &NodeMask) -> Vec<u32> {
    let mut values = vec![0u32; g.horizon()];
    let (nbrs, times) = g.adjacency(u);
    for (&w, &t) in nbrs.iter().zip(times) {
        if subset.contains(NodeId(w)) {
            values[t as usize - 1] += 1;
        }
    }
    values
}

/// Simple graph obtained by erasing timestamps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetemporalGraph {
    offsets: Vec<usize>,
    nbrs: Vec<u32>,
}

pub fn detemporal(g: &TemporalGraph) -> DetemporalGraph {
    let mut offsets = Vec::with_capacity(g.n() + 1);
    let mut nbrs = Vec::new();
    offsets.push(0);
    for u in g.nodes() {
        nbrs.extend(g.neighbor_groups(u).map(|(w, _)| w.0));
        offsets.push(nbrs.len());
    }
    DetemporalGraph { offsets, nbrs }
}

impl DetemporalGraph {
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.len() / 2
    }

    /// Sorted, duplicate-free neighbor ids.
    pub fn neighbors(&self, u: NodeId) -> &[u32] {
        &self.nbrs[self.offsets[u.index()]..self.offsets[u.index() + 1]]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u.index() + 1] - self.offsets[u.index()]
    }
}

/// Anything that can enumerate the distinct neighbors of a node; lets the
/// k-core peel run on either graph form.
pub trait SimpleAdjacency {
    fn node_count(&self) -> usize;
    fn for_each_neighbor<F: FnMut(NodeId)>(&self, u: NodeId, f: F);
}

impl SimpleAdjacency for DetemporalGraph {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn for_each_neighbor<F: FnMut(NodeId)>(&self, u: NodeId, mut f: F) {
        for &w in self.neighbors(u) {
            f(NodeId(w));
        }
    }
}

impl SimpleAdjacency for TemporalGraph {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn for_each_neighbor<F: FnMut(NodeId)>(&self, u: NodeId, mut f: F) {
        for (w, _) in self.neighbor_groups(u) {
            f(w);
        }
    }
}
