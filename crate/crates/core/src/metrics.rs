//! Goodness scores for a node set: internal temporal edges per member (AD)
//! and the internal-to-cross temporal edge ratio (AS).

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::graph::{NodeMask, TemporalGraph};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricReport {
    pub ad: f64,
    /// `f64::INFINITY` when there are internal edges but no cross edges.
    pub as_: f64,
    pub internal_edges: usize,
    pub cross_edges: usize,
    pub community_size: usize,
}

impl Serialize for MetricReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MetricReport", 5)?;
        st.serialize_field("AD", &self.ad)?;
        if self.as_.is_infinite() {
            st.serialize_field("AS", "inf")?;
        } else {
            st.serialize_field("AS", &self.as_)?;
        }
        st.serialize_field("internal", &self.internal_edges)?;
        st.serialize_field("cross", &self.cross_edges)?;
        st.serialize_field("size", &self.community_size)?;
        st.end()
    }
}

/// `(internal, cross)` temporal edge counts for `members`.
pub fn edge_counts(g: &TemporalGraph, members: &NodeMask) -> (usize, usize) {
    let (mut internal, mut cross) = (0, 0);
    for u in members.iter() {
        let (nbrs, _) = g.adjacency(u);
        for &w in nbrs {
            if members.contains(crate::graph::NodeId(w)) {
                internal += 1;
            } else {
                cross += 1;
            }
        }
    }
    // internal pairs were seen from both ends
    (internal / 2, cross)
}

fn require_nonempty(members: &NodeMask) -> Result<usize> {
    match members.count() {
        0 => Err(Error::InvalidParameter("community is empty".into())),
        size => Ok(size),
    }
}

pub fn average_density(g: &TemporalGraph, members: &NodeMask) -> Result<f64> {
    let size = require_nonempty(members)?;
    let (internal, _) = edge_counts(g, members);
    Ok(2.0 * internal as f64 / size as f64)
}

pub fn average_separability(g: &TemporalGraph, members: &NodeMask) -> Result<f64> {
    require_nonempty(members)?;
    let (internal, cross) = edge_counts(g, members);
    Ok(separability(internal, cross))
}

fn separability(internal: usize, cross: usize) -> f64 {
    match (internal, cross) {
        (0, _) => 0.0,
        (_, 0) => f64::INFINITY,
        (i, c) => i as f64 / c as f64,
    }
}

pub fn metric_report(g: &TemporalGraph, members: &NodeMask) -> Result<MetricReport> {
    let size = require_nonempty(members)?;
    let (internal, cross) = edge_counts(g, members);
    Ok(MetricReport {
        ad: 2.0 * internal as f64 / size as f64,
        as_: separability(internal, cross),
        internal_edges: internal,
        cross_edges: cross,
        community_size: size,
    })
}
