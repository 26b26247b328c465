mod common;

use burstcore::{average_density, average_separability, metric_report, NodeMask, TemporalGraph};
use common::*;
use rand::Rng;

fn scan(g: &TemporalGraph, c: &NodeMask) -> (usize, usize) {
    let mut internal = 0;
    let mut cross = 0;
    for (u, v, _) in g.edges() {
        match (c.contains(u), c.contains(v)) {
            (true, true) => internal += 1,
            (true, false) | (false, true) => cross += 1,
            _ => {}
        }
    }
    (internal, cross)
}

#[test]
fn counts_match_edge_scan() {
    let mut r = rng(51);
    for _ in 0..200 {
        let g = random_graph(&mut r, 40, 10);
        let c = NodeMask::from_nodes(g.n(), g.nodes().filter(|_| r.random_bool(0.4)));
        if c.is_empty() {
            continue;
        }
        let (internal, cross) = scan(&g, &c);
        let rep = metric_report(&g, &c).unwrap();
        assert_eq!((rep.internal_edges, rep.cross_edges, rep.community_size), (internal, cross, c.count()));
        assert_eq!(average_density(&g, &c).unwrap(), 2.0 * internal as f64 / c.count() as f64);
        let expected = if internal == 0 {
            0.0
        } else if cross == 0 {
            f64::INFINITY
        } else {
            internal as f64 / cross as f64
        };
        assert_eq!(average_separability(&g, &c).unwrap(), expected);
    }
}

#[test]
fn relabeling_and_time_permutation_keep_ad() {
    let mut r = rng(52);
    for _ in 0..50 {
        let g = random_graph(&mut r, 30, 8);
        let n = g.n() as u32;
        let h = g.horizon() as u32;
        let c = NodeMask::from_nodes(g.n(), g.nodes().filter(|_| r.random_bool(0.5)));
        if c.is_empty() {
            continue;
        }
        let relabel = |u: u32| n - 1 - u;
        let retime = |t: u32| h + 1 - t;
        let g2 = TemporalGraph::from_triples(
            g.n(),
            g.edges().map(|(u, v, t)| (relabel(u.0), relabel(v.0), retime(t))),
        )
        .unwrap();
        let c2 = NodeMask::from_nodes(g.n(), c.iter().map(|u| burstcore::NodeId(relabel(u.0))));
        assert_eq!(average_density(&g, &c).unwrap(), average_density(&g2, &c2).unwrap());
    }
}

#[test]
fn extra_edges_move_scores_the_right_way() {
    let mut r = rng(53);
    let mut checked = 0;
    while checked < 50 {
        let g = random_graph(&mut r, 30, 8);
        let c = NodeMask::from_nodes(g.n(), g.nodes().filter(|u| u.0 % 2 == 0));
        let members: Vec<u32> = c.iter().map(|u| u.0).collect();
        let outsiders: Vec<u32> = g.nodes().filter(|u| !c.contains(*u)).map(|u| u.0).collect();
        if members.len() < 2 || outsiders.is_empty() {
            continue;
        }
        let base = metric_report(&g, &c).unwrap();
        let t = g.horizon() as u32 + 1;
        let edges: Vec<_> = g.edges().map(|(u, v, t)| (u.0, v.0, t)).collect();

        let mut with_internal = edges.clone();
        with_internal.push((members[0], members[1], t));
        let gi = TemporalGraph::from_triples(g.n(), with_internal).unwrap();
        assert!(average_density(&gi, &c).unwrap() > base.ad);

        let mut with_cross = edges;
        with_cross.push((members[0], outsiders[0], t));
        let gc = TemporalGraph::from_triples(g.n(), with_cross).unwrap();
        let after = average_separability(&gc, &c).unwrap();
        if base.as_.is_finite() && base.as_ > 0.0 {
            assert!(after < base.as_);
        }
        checked += 1;
    }
}
