mod common;

use common::*;
use greedypack::engine::{
    packing_process, random_embedding, split_bulk_reservoir, verify_packing, Embedding,
    PackingResult, RunConfig, Violation,
};
use greedypack::generators::{gnp, random_degenerate, random_tree};
use greedypack::graph::pairs;
use greedypack::rng::stream_rng;
use greedypack::{degeneracy, prepare_guest_family, Graph, PrepareOptions, PreparedGuest};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn family(guests: &[Graph], n: usize, d: usize, delta: f64) -> Vec<PreparedGuest> {
    prepare_guest_family(guests, n, d, &PrepareOptions { delta, auto_shrink: true })
        .unwrap()
        .guests
}

/// A successful packing of a few trees and 2-degenerate graphs into K_80.
fn successful_run() -> (Vec<PreparedGuest>, Graph, PackingResult) {
    let n = 80;
    let host = Graph::complete(n);
    for seed in 0..50u64 {
        let mut rng = stream_rng(seed, 0);
        let guests = vec![
            random_degenerate(50, 2, 10, &mut rng).unwrap(),
            random_tree(60, &mut rng),
            random_tree(45, &mut rng),
            random_degenerate(44, 2, 10, &mut rng).unwrap(),
        ];
        let prepared = family(&guests, n, 2, 0.05);
        let r = packing_process(&prepared, &host, &RunConfig::new(0.25, 0.05, seed)).unwrap();
        if r.is_success() {
            return (prepared, host, r);
        }
    }
    panic!("no successful run in 50 seeds");
}

#[test]
fn honest_result_passes() {
    let (guests, host, r) = successful_run();
    let v = verify_packing(&guests, &host, &r);
    assert!(v.passed(), "{v}");
}

#[test]
fn verifier_catches_mutations() {
    let (guests, host, r) = successful_run();
    let colored = r.colors.iter().position(|&c| c != 0).unwrap();
    let uncolored = r.colors.iter().position(|&c| c == 0).unwrap();
    let detects = |res: &PackingResult, gs: &[PreparedGuest], want: fn(&Violation) -> bool| {
        let v = verify_packing(gs, &host, res);
        assert!(!v.passed());
        assert!(v.violations.iter().any(want), "{v}");
    };

    let mut m = r.clone();
    m.colors[colored] = 0;
    detects(&m, &guests, |v| matches!(v, Violation::WrongColor { .. }));

    let mut m = r.clone();
    m.colors[uncolored] = 1;
    detects(&m, &guests, |v| matches!(v, Violation::WrongColor { .. }));

    let mut m = r.clone();
    m.uncovered += 1;
    detects(&m, &guests, |v| matches!(v, Violation::UncoveredMismatch { .. }));

    let mut m = r.clone();
    m.colors.pop();
    detects(&m, &guests, |v| matches!(v, Violation::ColorArrayLength { .. }));

    let mut m = r.clone();
    m.embeddings.pop();
    detects(&m, &guests, |v| matches!(v, Violation::GuestCount { .. }));

    // the same guest twice with the same map reuses every edge
    let mut m = r.clone();
    m.embeddings[1] = m.embeddings[0].clone();
    let twice = vec![guests[0].clone(), guests[0].clone(), guests[2].clone(), guests[3].clone()];
    detects(&m, &twice, |v| matches!(v, Violation::ColorOverlap { .. }));

    // a bulk edge of guest 1 relabelled as a reservoir edge
    let mut m = r.clone();
    let bulk_edge = (0..r.colors.len() as u32)
        .find(|e| r.colors[*e as usize] == 1 && !r.reservoir_edges.contains(e))
        .unwrap();
    m.reservoir_edges.push(bulk_edge);
    detects(&m, &guests, |v| matches!(v, Violation::WrongPhase { .. }));

    // swapping two images of a guest with edges moves some edge off its color
    let mut m = r.clone();
    let phi = &r.embeddings[0];
    let g = guests[0].graph();
    let (a, b) = g.edges().next().unwrap();
    let c = (0..g.n() as u32).find(|&c| !g.has_edge(a, c) && c != a && c != b).unwrap();
    let swapped: Vec<Option<u32>> = (0..g.n() as u32)
        .map(|p| match p {
            p if p == b => phi.image(c),
            p if p == c => phi.image(b),
            p => phi.image(p),
        })
        .collect();
    m.embeddings[0] = Embedding::from_options(&swapped, host.n()).unwrap();
    detects(&m, &guests, |v| matches!(v, Violation::WrongColor { .. } | Violation::ColorOverlap { .. } | Violation::WrongPhase { .. }));

    // a partial map
    let mut m = r.clone();
    let mut opts = r.embeddings[2].to_options();
    opts[0] = None;
    m.embeddings[2] = Embedding::from_options(&opts, host.n()).unwrap();
    detects(&m, &guests, |v| matches!(v, Violation::Unembedded { .. }));

    let mut m = r.clone();
    m.failure = Some(greedypack::engine::FailureRecord {
        stage: 1,
        phase: greedypack::engine::Phase::Embedding,
        embed: None,
        completion: None,
    });
    detects(&m, &guests, |v| matches!(v, Violation::NotSuccessful));
}

#[test]
fn stage_accounting_and_handshake() {
    let (guests, host, r) = successful_run();
    let mut bulk_left = r.stages[0].bulk_edges_left + r.stages[0].bulk_edges_removed;
    let mut res_left = r.stages[0].reservoir_edges_left + r.stages[0].reservoir_edges_removed;
    assert_eq!(bulk_left + res_left, host.m());
    assert_eq!(res_left, r.reservoir_edges.len());
    for (g, st) in guests.iter().zip(&r.stages) {
        let tail_edges = g.tail_len() * g.tail_degree();
        assert_eq!(g.completion_degrees().iter().sum::<usize>(), tail_edges);
        assert_eq!(st.reservoir_edges_removed, tail_edges);
        assert_eq!(st.bulk_edges_removed + st.reservoir_edges_removed, g.edge_count());
        bulk_left -= st.bulk_edges_removed;
        res_left -= st.reservoir_edges_removed;
        assert_eq!((st.bulk_edges_left, st.reservoir_edges_left), (bulk_left, res_left));
    }
    let used: usize = guests.iter().map(|g| g.edge_count()).sum();
    assert_eq!(r.uncovered, host.m() - used);
}

#[test]
fn same_seed_same_result() {
    let host = gnp(60, 0.7, &mut stream_rng(1, 0)).unwrap();
    let guests = family(&[random_tree(50, &mut stream_rng(2, 0)), random_tree(40, &mut stream_rng(3, 0))], 60, 1, 0.05);
    let mut cfg = RunConfig::new(0.2, 0.05, 77);
    cfg.audit_checkpoints = vec![0, 1, 2];
    let a = serde_json::to_string(&packing_process(&guests, &host, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&packing_process(&guests, &host, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    cfg.rng_seed = 78;
    let c = serde_json::to_string(&packing_process(&guests, &host, &cfg).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn split_of_complete_graph_uses_gamma() {
    let h = Graph::complete(30);
    let s = split_bulk_reservoir(&h, 1e-9, &mut stream_rng(0, 0)).unwrap();
    assert_eq!((s.bulk.m(), s.reservoir.m()), (435, 0));
    let s = split_bulk_reservoir(&h, 0.3, &mut stream_rng(0, 0)).unwrap();
    assert_eq!(s.bulk.m() + s.reservoir.m(), 435);
    assert!(split_bulk_reservoir(&gnp(30, 0.2, &mut stream_rng(0, 0)).unwrap(), 0.5, &mut stream_rng(0, 0)).is_err());
}

#[test]
fn triangle_into_path_fails_at_third_position() {
    let k3 = PreparedGuest::from_positional(Graph::complete(3), 0).unwrap();
    let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    for seed in 0..10 {
        let (_, f) = random_embedding(&k3, &p3, &mut stream_rng(seed, 1)).unwrap_err();
        assert_eq!((f.position, f.image_size), (2, 2));
    }
}

#[test]
fn empty_guest_embeds_anywhere() {
    let g = PreparedGuest::from_positional(Graph::empty(25), 0).unwrap();
    let phi = random_embedding(&g, &Graph::empty(25), &mut stream_rng(3, 1)).unwrap();
    assert!(phi.is_complete());
}

#[test]
fn spanning_tree_into_gnp_500() {
    let n = 500;
    let mut ok = 0;
    for seed in 0..100u64 {
        let mut rng = stream_rng(seed, 9);
        let host = gnp(n, 0.5, &mut rng).unwrap();
        let guest = &family(&[random_tree(n, &mut rng)], n, 1, 0.05)[0];
        if let Ok(phi) = random_embedding(guest, &host, &mut rng) {
            let bulk = guest.bulk_len() as u32;
            for (a, b) in guest.graph().edges().filter(|&(_, b)| b < bulk) {
                assert!(host.has_edge(phi.image(a).unwrap(), phi.image(b).unwrap()));
            }
            ok += 1;
        }
    }
    assert!(ok >= 99, "{ok} of 100");
}

#[test]
fn fifty_two_degenerate_guests_into_k300() {
    let n = 300;
    let host = Graph::complete(n);
    let mut ok = 0;
    for seed in 0..100u64 {
        let mut rng = stream_rng(seed, 10);
        let guests: Vec<Graph> = (0..50).map(|_| random_degenerate(160, 2, 30, &mut rng).unwrap()).collect();
        let prepared = family(&guests, n, 2, 0.04);
        let total: usize = prepared.iter().map(|g| g.edge_count()).sum();
        assert!(total as f64 <= 0.7 * pairs(n) as f64);
        let r = packing_process(&prepared, &host, &RunConfig::new(0.25, 0.04, seed)).unwrap();
        if r.is_success() {
            assert!(verify_packing(&prepared, &host, &r).passed());
            ok += 1;
        }
    }
    assert!(ok >= 95, "{ok} of 100");
}

fn random_small_family(seed: u64, d: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..7);
    (0..count)
        .map(|_| {
            let v = rng.gen_range(1..40);
            let g = random_degenerate_shuffled(v, rng.gen_range(0..=d), &mut rng);
            // knock out some edges so that isolated vertices appear too
            let keep: Vec<(u32, u32)> = g.edges().filter(|_| rng.gen_bool(0.8)).collect();
            Graph::from_edges(v, keep).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preparation_preserves_edges(seed in any::<u64>(), d in 1usize..=3) {
        let guests = random_small_family(seed, d);
        let n = 40;
        let fam = prepare_guest_family(&guests, n, d, &PrepareOptions { delta: 0.05, auto_shrink: true }).unwrap();
        let mut seen: Vec<Vec<u32>> = guests.iter().map(|g| vec![0; g.n() * g.n()]).collect();
        let mut sources = Vec::new();
        for pg in &fam.guests {
            prop_assert_eq!(pg.n(), n);
            prop_assert_eq!(pg.tail_len(), fam.tail_len);
            sources.extend_from_slice(pg.sources());
            for (a, b) in pg.graph().edges() {
                let (oa, ob) = (pg.origins()[a as usize].unwrap(), pg.origins()[b as usize].unwrap());
                prop_assert_eq!(oa.guest, ob.guest);
                let g = &guests[oa.guest];
                prop_assert!(g.has_edge(oa.vertex, ob.vertex));
                let (u, v) = (oa.vertex.min(ob.vertex) as usize, oa.vertex.max(ob.vertex) as usize);
                seen[oa.guest][u * g.n() + v] += 1;
            }
            for t in 0..n {
                prop_assert!(pg.left_neighbors(t).len() <= 2 * d);
            }
            let first_tail = pg.bulk_len() as u32;
            for x in first_tail..n as u32 {
                prop_assert_eq!(pg.graph().degree(x), pg.tail_degree());
                prop_assert!(pg.graph().neighbors(x).iter().all(|&y| y < first_tail));
            }
            prop_assert_eq!(pg.completion_degrees().iter().sum::<usize>(), pg.tail_len() * pg.tail_degree());
            prop_assert!(degeneracy(pg.graph()) <= d);
        }
        for (i, g) in guests.iter().enumerate() {
            for (u, v) in g.edges() {
                prop_assert_eq!(seen[i][u as usize * g.n() + v as usize], 1);
            }
        }
        sources.sort_unstable();
        prop_assert_eq!(sources, (0..guests.len()).collect::<Vec<_>>());
        let small = fam
            .guests
            .iter()
            .filter(|g| 2 * (0..n as u32).filter(|&v| g.graph().degree(v) > 0).count() <= n)
            .count();
        prop_assert!(small <= 1, "{small} guests still have at most n/2 non-isolated vertices");
    }
}
