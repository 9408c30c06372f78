mod common;

use rand::Rng;
use yasca::graph::Partition;
use yasca::louvain::{aggregate, louvain, louvain_detailed, modularity, LouvainConfig};

#[test]
fn two_triangles_optimum_matches_exhaustive_search() {
    let raw = common::two_triangles();
    let (best, assignment) = common::exhaustive_best_modularity(&raw);
    assert!((best - 0.357143).abs() < 1e-6);
    let out = louvain_detailed(&raw.to_graph(), &LouvainConfig::default()).unwrap();
    assert_eq!(out.partition, common::partition(&assignment));
    assert!((out.modularity.unwrap() - best).abs() < 1e-12);
}

#[test]
fn disjoint_cliques_are_separated() {
    let raw = common::two_disjoint_k4();
    let (_, assignment) = common::exhaustive_best_modularity(&raw);
    for seed in 0..10 {
        let cfg = LouvainConfig {
            rng_seed: seed,
            ..LouvainConfig::default()
        };
        let p = louvain(&raw.to_graph(), &cfg).unwrap();
        assert_eq!(p, common::partition(&assignment));
        assert_eq!(p, Partition::from_assignment([0, 0, 0, 0, 1, 1, 1, 1]));
    }
}

#[test]
fn tracked_modularity_and_monotonicity() {
    let mut rng = common::rng(2);
    for i in 0..200 {
        let n = rng.gen_range(2..=40);
        let raw = common::random_graph(&mut rng, n, 0.15, 3);
        if raw.edges.is_empty() {
            continue;
        }
        let g = raw.to_graph();
        let cfg = LouvainConfig {
            rng_seed: i,
            ..LouvainConfig::default()
        };
        let out = louvain_detailed(&g, &cfg).unwrap();
        let q = out.modularity.unwrap();
        let recomputed = modularity(&g, &out.partition).unwrap();
        assert!((q - recomputed).abs() < 1e-9);
        assert!((q - common::modularity_oracle(&raw, out.partition.assignment())).abs() < 1e-9);
        for w in out.pass_modularity.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        assert!(q >= modularity(&g, &Partition::singletons(n)).unwrap() - 1e-12);
        assert_eq!(out.partition, louvain(&g, &cfg).unwrap());
    }
}

#[test]
fn aggregation_conserves_weight_and_degree() {
    let mut rng = common::rng(13);
    for _ in 0..100 {
        let n = rng.gen_range(1..=30);
        let raw = common::random_graph(&mut rng, n, 0.2, 5);
        let g = raw.to_graph();
        let k = rng.gen_range(1..=n);
        let p = Partition::from_assignment((0..n).map(|_| rng.gen_range(0..k)));
        let h = aggregate(&g, &p);
        assert!((h.total_weight() - g.total_weight()).abs() <= 1e-9 * g.total_weight().max(1.0));
        let dg: f64 = g.degrees().iter().sum();
        let dh: f64 = h.degrees().iter().sum();
        assert!((dg - dh).abs() <= 1e-9 * dg.max(1.0));
        for u in 0..h.node_count() {
            for &(v, w) in h.neighbors(u) {
                assert_eq!(h.edge_weight(v, u), Some(w));
            }
        }
    }
}

#[test]
fn weighted_disconnected_graph() {
    // Two heavy pairs joined by a light edge, plus isolated nodes.
    let mut b = yasca::graph::GraphBuilder::with_labels(["a", "b", "c", "d", "x", "y"]).unwrap();
    b.add_edge(0, 1, 10.0).unwrap();
    b.add_edge(2, 3, 10.0).unwrap();
    b.add_edge(1, 2, 0.1).unwrap();
    let p = louvain(&b.build(), &LouvainConfig::default()).unwrap();
    assert_eq!(p, Partition::from_assignment([0, 0, 1, 1, 2, 3]));
}
