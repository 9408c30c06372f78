//! Weighted Louvain modularity optimization.
//!
//! Works on disconnected graphs and graphs with self-loops (the aggregated
//! graphs of later passes always carry them). Nodes without incident weight
//! can never gain modularity by moving, so they stay singletons.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, Partition};
use crate::rng;

#[derive(Debug, Error, PartialEq)]
pub enum LouvainError {
    #[error("modularity is undefined for a graph without edges")]
    NoEdges,
    #[error("partition covers {partition} nodes but the graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },
    #[error("cannot cluster an empty graph")]
    EmptyGraph,
    #[error("invalid Louvain configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LouvainConfig {
    /// Seeds the node visiting order.
    pub rng_seed: u64,
    pub max_passes: usize,
    /// A pass improving modularity by no more than this ends the run.
    pub min_gain: f64,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            rng_seed: 0,
            max_passes: 50,
            min_gain: 1e-7,
        }
    }
}

/// Newman-Girvan modularity `Q = sum_c [ e_c / m - (d_c / 2m)^2 ]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64, LouvainError> {
    if p.len() != g.node_count() {
        return Err(LouvainError::SizeMismatch {
            partition: p.len(),
            graph: g.node_count(),
        });
    }
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(LouvainError::NoEdges);
    }
    let k = p.community_count();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for u in 0..g.node_count() {
        let c = p.community_of(u);
        internal[c] += g.self_loop_weight(u);
        degree[c] += g.degree_unchecked(u);
    }
    for (u, v, w) in g.edges() {
        if p.community_of(u) == p.community_of(v) {
            internal[p.community_of(u)] += w;
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(e, d)| e / m - (d / (2.0 * m)).powi(2))
        .sum())
}

/// Collapses every community of `p` into one node. Intra-community weight
/// (self-loops included) becomes the new node's self-loop; weights between
/// communities are summed. Node `c` of the result is community `c` of `p`.
pub fn aggregate(g: &Graph, p: &Partition) -> Graph {
    let k = p.community_count();
    let mut loops = vec![0.0; k];
    let mut between: HashMap<(usize, usize), f64> = HashMap::new();
    for u in 0..g.node_count() {
        loops[p.community_of(u)] += g.self_loop_weight(u);
    }
    for (u, v, w) in g.edges() {
        let (a, b) = (p.community_of(u), p.community_of(v));
        if a == b {
            loops[a] += w;
        } else {
            *between.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
        }
    }
    let mut b = GraphBuilder::with_labels((0..k).map(|c| c.to_string()))
        .expect("community labels are distinct");
    let mut pairs: Vec<_> = between.into_iter().collect();
    pairs.sort_by_key(|&(key, _)| key);
    for ((x, y), w) in pairs {
        b.add_edge(x, y, w)
            .expect("aggregated weights are positive");
    }
    for (c, w) in loops.into_iter().enumerate() {
        if w > 0.0 {
            b.add_edge(c, c, w)
                .expect("aggregated weights are positive");
        }
    }
    b.build()
}

/// Result of a Louvain run with its modularity trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct LouvainOutcome {
    pub partition: Partition,
    /// Final modularity as tracked by the optimizer; `None` when the graph has no edges.
    pub modularity: Option<f64>,
    /// Modularity of the starting singleton partition followed by the value after each pass.
    pub pass_modularity: Vec<f64>,
    /// Modularity after every local-moving sweep, across all passes.
    pub sweep_modularity: Vec<f64>,
}

pub fn louvain(g: &Graph, cfg: &LouvainConfig) -> Result<Partition, LouvainError> {
    louvain_detailed(g, cfg).map(|o| o.partition)
}

pub fn louvain_detailed(g: &Graph, cfg: &LouvainConfig) -> Result<LouvainOutcome, LouvainError> {
    if cfg.max_passes == 0 {
        return Err(LouvainError::InvalidConfig(
            "max_passes must be positive".into(),
        ));
    }
    if cfg.min_gain.is_nan() || cfg.min_gain < 0.0 {
        return Err(LouvainError::InvalidConfig(
            "min_gain must be non-negative".into(),
        ));
    }
    let n = g.node_count();
    if n == 0 {
        return Err(LouvainError::EmptyGraph);
    }
    if g.total_weight() <= 0.0 {
        return Ok(LouvainOutcome {
            partition: Partition::singletons(n),
            modularity: None,
            pass_modularity: Vec::new(),
            sweep_modularity: Vec::new(),
        });
    }

    let mut rng = rng::seeded(cfg.rng_seed);
    let mut membership: Vec<usize> = (0..n).collect();
    let mut q = modularity(g, &Partition::singletons(n))?;
    let mut pass_modularity = vec![q];
    let mut sweep_modularity = Vec::new();
    let mut level = g.clone();

    for _ in 0..cfg.max_passes {
        let (level_partition, moved) = move_nodes(&level, &mut rng, &mut sweep_modularity);
        if !moved {
            break;
        }
        for c in membership.iter_mut() {
            *c = level_partition.community_of(*c);
        }
        let new_q = modularity(&level, &level_partition)?;
        debug_assert!(
            new_q >= q - 1e-12,
            "pass lowered modularity: {q} -> {new_q}"
        );
        let gain = new_q - q;
        q = new_q;
        pass_modularity.push(q);
        if gain <= cfg.min_gain {
            break;
        }
        level = aggregate(&level, &level_partition);
    }

    Ok(LouvainOutcome {
        partition: Partition::from_assignment(membership),
        modularity: Some(q),
        pass_modularity,
        sweep_modularity,
    })
}

/// Local-moving phase on one level. Returns the level partition and whether
/// any node changed community.
fn move_nodes(g: &Graph, rng: &mut rng::Rng, trace: &mut Vec<f64>) -> (Partition, bool) {
    let n = g.node_count();
    let m2 = 2.0 * g.total_weight();
    let degree = g.degrees();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total = degree.clone();
    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut any_move = false;
    let mut q = modularity(g, &Partition::singletons(n)).unwrap_or(0.0);
    // Gains are in edge-weight units; anything this far below m is rounding.
    let eps = 1e-12 * g.total_weight();

    loop {
        order.shuffle(rng);
        let mut moves = 0usize;
        for &u in &order {
            let k_u = degree[u];
            if k_u == 0.0 {
                continue;
            }
            let own = community[u];
            for &(v, w) in g.neighbors(u) {
                let c = community[v];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += w;
            }
            total[own] -= k_u;
            let stay = link[own] - total[own] * k_u / m2;
            let mut best = own;
            let mut best_gain = 0.0;
            touched.sort_unstable();
            for &c in &touched {
                if c == own {
                    continue;
                }
                let gain = (link[c] - total[c] * k_u / m2) - stay;
                if gain > best_gain {
                    best_gain = gain;
                    best = c;
                }
            }
            if best != own && best_gain > eps {
                community[u] = best;
                moves += 1;
            } else {
                best = own;
            }
            total[best] += k_u;
            for &c in &touched {
                link[c] = 0.0;
            }
            touched.clear();
        }
        let current = Partition::from_assignment(community.iter().copied());
        let new_q = modularity(g, &current).unwrap_or(0.0);
        debug_assert!(
            new_q >= q - 1e-12,
            "sweep lowered modularity: {q} -> {new_q}"
        );
        q = new_q;
        trace.push(q);
        if moves == 0 {
            return (current, any_move);
        }
        any_move = true;
    }
}
