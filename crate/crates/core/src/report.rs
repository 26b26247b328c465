//! JSON views of results with node ids replaced by their labels.

use serde_json::{json, Value};

use crate::density::Density;
use crate::graph::TemporalGraph;
use crate::mining::MdcResult;
use crate::pareto::ParetoPoint;

fn density(d: Density) -> Value {
    json!({"num": d.num, "den": d.den})
}

pub fn mdc_json(g: &TemporalGraph, r: &MdcResult) -> Value {
    let nodes: Vec<&str> = r.nodes.iter().map(|&u| g.label(u)).collect();
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "node": g.label(w.node),
                "window": [w.window.0, w.window.1],
                "density": density(w.density),
            })
        })
        .collect();
    json!({
        "l": r.l,
        "delta": density(r.delta),
        "nodes": nodes,
        "witnesses": witnesses,
    })
}

pub fn frontier_json(g: &TemporalGraph, points: &[ParetoPoint]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                let nodes: Vec<&str> = p.nodes.iter().map(|&u| g.label(u)).collect();
                json!({"l": p.l, "delta": density(p.delta), "nodes": nodes})
            })
            .collect(),
    )
}
