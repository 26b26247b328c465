mod common;

use burstcore::mining::{k_core_within, mdc_nodes, Threshold};
use burstcore::{
    detemporal, k_core, mdc, mdc_baseline, mdc_plus, Algo, Density, NodeId, NodeMask, PeelOrder, PeelState,
    TemporalGraph,
};
use common::*;
use rand::Rng;

fn pick_params(r: &mut rand_chacha::ChaCha8Rng, g: &TemporalGraph) -> (usize, Density) {
    let l = r.random_range(2..=5usize).min(g.horizon());
    let (num, den) = DELTAS[r.random_range(0..DELTAS.len())];
    (l, Density::new(num, den))
}

#[test]
fn k_core_matches_repeated_scan() {
    let mut r = rng(21);
    let n = 200;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(0.05) {
                edges.push((u, v, 1));
            }
        }
    }
    let g = TemporalGraph::from_triples(n as usize, edges).unwrap();
    for k in [Density::integer(3), Density::new(7, 2), Density::integer(8)] {
        let fast = k_core(&detemporal(&g), k).to_vec();
        assert_eq!(fast, naive_k_core(&g, k));
        assert_eq!(k_core(&g, k).to_vec(), fast);
    }
}

#[test]
fn three_algorithms_agree() {
    let mut r = rng(22);
    for _ in 0..150 {
        let g = random_graph(&mut r, 40, 10);
        let (l, delta) = pick_params(&mut r, &g);
        let b = mdc_baseline(&g, l, delta).unwrap();
        let s = mdc(&g, l, delta).unwrap();
        let p = mdc_plus(&g, l, delta).unwrap();
        assert_eq!(b.nodes, s.nodes);
        assert_eq!(s.nodes, p.nodes);
        assert_eq!(b.witnesses, p.witnesses);
        p.verify(&g).unwrap();
    }
}

#[test]
fn baseline_is_the_maximal_dense_set() {
    let mut r = rng(23);
    for _ in 0..40 {
        let g = random_graph(&mut r, 10, 6);
        let (l, delta) = pick_params(&mut r, &g);
        let oracle = subset_enumeration_core(&g, l, delta);
        assert_eq!(mdc_baseline(&g, l, delta).unwrap().nodes, oracle);
    }
}

#[test]
fn planted_clique_with_pendant() {
    let mut edges = Vec::new();
    for t in 1..=3 {
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((u, v, t));
            }
        }
    }
    edges.push((2, 4, 1));
    let g = TemporalGraph::from_triples(5, edges).unwrap();
    let oracle = subset_enumeration_core(&g, 3, Density::integer(3));
    assert_eq!(oracle, (0..4).map(NodeId).collect::<Vec<_>>());
    for r in [
        mdc_baseline(&g, 3, Density::integer(3)).unwrap(),
        mdc(&g, 3, Density::integer(3)).unwrap(),
        mdc_plus(&g, 3, Density::integer(3)).unwrap(),
    ] {
        assert_eq!(r.nodes, oracle);
        assert!(r.witnesses.iter().all(|w| w.window == (1, 3) && w.density == Density::integer(3)));
    }
}

#[test]
fn result_is_a_fixpoint() {
    let mut r = rng(24);
    for _ in 0..80 {
        let g = random_graph(&mut r, 40, 10);
        let (l, delta) = pick_params(&mut r, &g);
        let res = mdc_plus(&g, l, delta).unwrap();
        let mask = mask_of(&g, &res.nodes);
        for &u in &res.nodes {
            let deg = g.neighbor_groups(u).filter(|(w, _)| mask.contains(*w)).count();
            assert!(!delta.exceeds_count(deg as u64));
            let ds = naive_degree_sequence(&g, u, &mask);
            assert!(burstcore::brute_force_msd(&ds, l).unwrap().density >= delta);
        }
    }
}

#[test]
fn peel_order_does_not_matter() {
    let mut r = rng(25);
    for _ in 0..60 {
        let g = random_graph(&mut r, 40, 10);
        let (l, delta) = pick_params(&mut r, &g);
        let reference = mdc_nodes(&g, l, delta, Algo::Incremental, PeelOrder::Fifo).unwrap();
        for seed in 0..5 {
            for algo in [Algo::Sweep, Algo::Incremental] {
                let got = mdc_nodes(&g, l, delta, algo, PeelOrder::Shuffled(seed)).unwrap();
                assert_eq!(got, reference);
            }
        }
    }
}

#[test]
fn higher_threshold_gives_subset() {
    let mut r = rng(26);
    for _ in 0..60 {
        let g = random_graph(&mut r, 40, 10);
        let l = r.random_range(2..=4usize).min(g.horizon());
        let mut prev: Option<NodeMask> = None;
        for (num, den) in DELTAS {
            let cur = mask_of(&g, &mdc_plus(&g, l, Density::new(num, den)).unwrap().nodes);
            if let Some(p) = &prev {
                assert!(cur.is_subset_of(p));
            }
            prev = Some(cur);
        }
    }
}

#[test]
fn result_inside_k_core() {
    let mut r = rng(27);
    for _ in 0..60 {
        let g = random_graph(&mut r, 40, 10);
        let (l, delta) = pick_params(&mut r, &g);
        let res = mask_of(&g, &mdc_plus(&g, l, delta).unwrap().nodes);
        assert!(res.is_subset_of(&k_core(&detemporal(&g), delta)));
    }
}

#[test]
fn deleted_nodes_hold_no_cache() {
    let mut r = rng(28);
    for _ in 0..60 {
        let g = random_graph(&mut r, 40, 10);
        let (l, delta) = pick_params(&mut r, &g);
        let core = k_core_within(&g, delta, &NodeMask::full(g.n()));
        let mut state =
            PeelState::new(&g, l, &core, Threshold::AtLeast(delta), Algo::Incremental, PeelOrder::Fifo).unwrap();
        state.run_lazy();
        let survivors = state.survivors();
        let cached = state.cached_nodes();
        assert!(cached.iter().all(|u| survivors.contains(u)));
        // every survivor was examined
        assert_eq!(cached, survivors);
        for &u in &survivors {
            let cache = state.cache(u).unwrap();
            assert_eq!(cache.ds, naive_degree_sequence(&g, u, state.alive()));
        }
    }
}
