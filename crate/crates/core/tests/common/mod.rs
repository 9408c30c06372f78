//! Test-only reference implementations and fixtures.
//!
//! The oracles here work from raw edge lists and plain vectors; none of them
//! calls into the library code they are used to check.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yasca::graph::{GraphBuilder, Partition};
use yasca::Graph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Undirected edge list with integer weights, `u < v`.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, u32)>,
}

impl RawGraph {
    pub fn to_graph(&self) -> Graph {
        let mut b = GraphBuilder::with_labels((0..self.n).map(|i| format!("v{i}"))).unwrap();
        for &(u, v, w) in &self.edges {
            b.add_edge(u, v, w as f64).unwrap();
        }
        b.build()
    }

    pub fn total(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w as f64).sum()
    }
}

/// G(n, p) with weights drawn from `1..=max_weight`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, max_weight: u32) -> RawGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    RawGraph { n, edges }
}

/// `groups` blocks of `size` nodes; intra-block edges with `p_in`, others with `p_out`.
pub fn planted_partition(
    rng: &mut ChaCha8Rng,
    groups: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
) -> (RawGraph, Vec<usize>) {
    let n = groups * size;
    let truth: Vec<usize> = (0..n).map(|u| u / size).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if truth[u] == truth[v] { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((u, v, 1));
            }
        }
    }
    (RawGraph { n, edges }, truth)
}

// ---------------------------------------------------------------- NMI

/// NMI straight from the contingency-table definition, using a hash map of
/// label pairs and log-ratio form `I = sum p_ij ln(p_ij / (p_i p_j))`.
pub fn nmi_oracle(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut pa: HashMap<usize, f64> = HashMap::new();
    let mut pb: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0;
        *pa.entry(x).or_default() += 1.0;
        *pb.entry(y).or_default() += 1.0;
    }
    let h = |m: &HashMap<usize, f64>| -> f64 {
        let mut keys: Vec<_> = m.keys().copied().collect();
        keys.sort_unstable();
        keys.iter().map(|k| -(m[k] / n) * (m[k] / n).ln()).sum()
    };
    let (ha, hb) = (h(&pa), h(&pb));
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    if ha == 0.0 || hb == 0.0 {
        return 0.0;
    }
    let mut keys: Vec<_> = joint.keys().copied().collect();
    keys.sort_unstable();
    let mut mi = 0.0;
    for (x, y) in keys {
        let pij = joint[&(x, y)] / n;
        mi += pij * (pij / ((pa[&x] / n) * (pb[&y] / n))).ln();
    }
    mi / (ha * hb).sqrt()
}

// ---------------------------------------------------------------- local metrics

/// `(size, boundary size, e_in, e_out, b_in)` of `members` by full edge enumeration.
pub fn community_counts(g: &RawGraph, members: &[usize]) -> (usize, usize, u64, u64, u64) {
    let inside = |u: usize| members.contains(&u);
    let boundary: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&u| {
            g.edges
                .iter()
                .any(|&(a, b, _)| (a == u && !inside(b)) || (b == u && !inside(a)))
        })
        .collect();
    let on_boundary = |u: usize| boundary.contains(&u);
    let (mut e_in, mut e_out, mut b_in) = (0u64, 0u64, 0u64);
    for &(u, v, w) in &g.edges {
        let w = w as u64;
        match (inside(u), inside(v)) {
            (true, true) => {
                e_in += w;
                if on_boundary(u) || on_boundary(v) {
                    b_in += w;
                }
            }
            (true, false) | (false, true) => e_out += w,
            _ => {}
        }
    }
    (members.len(), boundary.len(), e_in, e_out, b_in)
}

/// `(R, M, L)` from enumerated counts.
pub fn metrics_oracle(g: &RawGraph, members: &[usize]) -> (f64, f64, f64) {
    let (size, bsize, e_in, e_out, b_in) = community_counts(g, members);
    let r = if b_in + e_out == 0 {
        1.0
    } else {
        b_in as f64 / (b_in + e_out) as f64
    };
    let m = if e_out == 0 {
        f64::INFINITY
    } else {
        e_in as f64 / e_out as f64
    };
    let l_in = 2.0 * e_in as f64 / size as f64;
    let l_ex = if bsize == 0 {
        0.0
    } else {
        e_out as f64 / bsize as f64
    };
    let l = if l_in == 0.0 {
        0.0
    } else if l_ex == 0.0 {
        f64::INFINITY
    } else {
        l_in / l_ex
    };
    (r, m, l)
}

// ---------------------------------------------------------------- consensus

/// Per-pair co-membership counts recounted pair by pair, bipartition by bipartition.
pub fn pair_recount(
    n: usize,
    communities: &[Vec<usize>],
    both_clusters: bool,
) -> Vec<((usize, usize), usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let mut count = 0;
            for c in communities {
                let (iu, iv) = (c.contains(&u), c.contains(&v));
                let together = if both_clusters { iu == iv } else { iu && iv };
                if together {
                    count += 1;
                }
            }
            out.push(((u, v), count));
        }
    }
    out
}

// ---------------------------------------------------------------- modularity

pub fn modularity_oracle(g: &RawGraph, assignment: &[usize]) -> f64 {
    let m = g.total();
    let k = assignment.iter().max().map_or(0, |&x| x + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for &(u, v, w) in &g.edges {
        let w = w as f64;
        degree[assignment[u]] += w;
        degree[assignment[v]] += w;
        if assignment[u] == assignment[v] {
            internal[assignment[u]] += w;
        }
    }
    (0..k)
        .map(|c| internal[c] / m - (degree[c] / (2.0 * m)).powi(2))
        .sum()
}

/// Best modularity over every set partition (restricted growth strings).
pub fn exhaustive_best_modularity(g: &RawGraph) -> (f64, Vec<usize>) {
    let n = g.n;
    let mut a = vec![0usize; n];
    let mut best = (f64::NEG_INFINITY, a.clone());
    fn rec(i: usize, max: usize, a: &mut Vec<usize>, g: &RawGraph, best: &mut (f64, Vec<usize>)) {
        if i == a.len() {
            let q = modularity_oracle(g, a);
            if q > best.0 {
                *best = (q, a.clone());
            }
            return;
        }
        for c in 0..=max + 1 {
            a[i] = c;
            rec(i + 1, max.max(c), a, g, best);
        }
    }
    if n == 0 {
        return (0.0, a);
    }
    a[0] = 0;
    rec(1, 0, &mut a, g, &mut best);
    best
}

pub fn partition(ids: &[usize]) -> Partition {
    Partition::from_assignment(ids.iter().copied())
}

// ---------------------------------------------------------------- fixtures

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn two_triangles() -> RawGraph {
    RawGraph {
        n: 6,
        edges: vec![
            (0, 1, 1),
            (0, 2, 1),
            (1, 2, 1),
            (2, 3, 1),
            (3, 4, 1),
            (3, 5, 1),
            (4, 5, 1),
        ],
    }
}

pub fn two_disjoint_k4() -> RawGraph {
    let mut edges = Vec::new();
    for base in [0, 4] {
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((base + u, base + v, 1));
            }
        }
    }
    RawGraph { n: 8, edges }
}
