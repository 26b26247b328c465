//! Bursting community mining on temporal graphs.
//!
//! A bursting community is the maximal node set in which every member keeps
//! an average degree of at least `delta` inside the set over some window of
//! at least `l` consecutive snapshots. The crate computes these cores for
//! fixed `(l, delta)`, enumerates the Pareto frontier over both parameters,
//! and scores node sets.

pub mod density;
pub mod error;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod mining;
pub mod pareto;
pub mod report;
pub mod segment;

pub use density::Density;
pub use error::{Error, Result};
pub use generate::{generate, Burst, GenConfig, Generated};
pub use graph::{
    build_graph, degree_sequence, detemporal, parse_edge_list, BucketWidth, DegreeSequence,
    DetemporalGraph, GraphStats, IngestStats, NodeId, NodeMask, ParsedEdges, TemporalGraph,
};
pub use metrics::{average_density, average_separability, metric_report, MetricReport};
pub use mining::{k_core, mdc, mdc_baseline, mdc_plus, Algo, MdcResult, PeelOrder, PeelState, Witness};
pub use pareto::{max_delta, max_l, pomdc, pomdc_baseline, ParetoPoint};
pub use segment::{brute_force_msd, compute_msd, update_msd, CumCurve, HullWindow, Msd, MtsCache};
