//! Consensus graph over a set of seed bipartitions.
//!
//! Each seed's local community `C` splits the vertex set into `{C, V \ C}`.
//! The consensus graph links two nodes with weight equal to the fraction of
//! bipartitions that put them in the same block, keeping only links whose
//! weight reaches the threshold `tau`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError};

#[derive(Debug, Error, PartialEq)]
pub enum ConsensusError {
    #[error("no bipartitions to combine")]
    Empty,
    #[error("co-membership of a node with itself is undefined (node {0})")]
    SameNode(usize),
    #[error("node {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("threshold tau = {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("unknown co-membership mode {0:?} (expected both-clusters or community-only)")]
    UnknownMode(String),
    #[error("{0}")]
    Graph(String),
}

impl From<GraphError> for ConsensusError {
    fn from(e: GraphError) -> Self {
        ConsensusError::Graph(e.to_string())
    }
}

/// One seed's community; its complement is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    seed: usize,
    community: Vec<usize>,
}

impl Bipartition {
    /// Sorts and deduplicates `community`. `None` if the seed is not a member.
    pub fn new(seed: usize, mut community: Vec<usize>) -> Option<Self> {
        community.sort_unstable();
        community.dedup();
        community
            .binary_search(&seed)
            .ok()
            .map(|_| Self { seed, community })
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    /// Members in ascending order.
    pub fn community(&self) -> &[usize] {
        &self.community
    }

    pub fn contains(&self, u: usize) -> bool {
        self.community.binary_search(&u).is_ok()
    }

    fn membership(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &u in &self.community {
            m[u] = true;
        }
        m
    }
}

/// Which blocks of a bipartition count as shared clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoMembership {
    /// Both the community and its complement.
    #[default]
    BothClusters,
    CommunityOnly,
}

impl fmt::Display for CoMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoMembership::BothClusters => "both-clusters",
            CoMembership::CommunityOnly => "community-only",
        })
    }
}

impl FromStr for CoMembership {
    type Err = ConsensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both-clusters" => Ok(CoMembership::BothClusters),
            "community-only" => Ok(CoMembership::CommunityOnly),
            other => Err(ConsensusError::UnknownMode(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsensusConfig {
    pub tau: f64,
    pub mode: CoMembership,
}

impl Default for ConsensusConfig {
    fn default() -> Self {
        Self {
            tau: 0.5,
            mode: CoMembership::BothClusters,
        }
    }
}

/// Number of bipartitions placing `u` and `v` in the same block.
pub fn co_membership_count(
    bips: &[Bipartition],
    u: usize,
    v: usize,
    mode: CoMembership,
) -> Result<usize, ConsensusError> {
    if u == v {
        return Err(ConsensusError::SameNode(u));
    }
    Ok(bips
        .iter()
        .filter(|b| {
            let (in_u, in_v) = (b.contains(u), b.contains(v));
            match mode {
                CoMembership::BothClusters => in_u == in_v,
                CoMembership::CommunityOnly => in_u && in_v,
            }
        })
        .count())
}

/// Co-membership counts for every pair `u < v`, packed row-major over the
/// strict upper triangle.
#[derive(Debug, Clone)]
pub struct PairCounts {
    n: usize,
    total: usize,
    counts: Vec<u32>,
}

impl PairCounts {
    pub fn new(n: usize, bips: &[Bipartition], mode: CoMembership) -> Result<Self, ConsensusError> {
        for b in bips {
            if let Some(&bad) = b.community.iter().find(|&&u| u >= n) {
                return Err(ConsensusError::NodeOutOfRange { index: bad, n });
            }
        }
        let mut counts = vec![0u32; n * n.saturating_sub(1) / 2];
        match mode {
            CoMembership::CommunityOnly => {
                for b in bips {
                    for (i, &u) in b.community.iter().enumerate() {
                        for &v in &b.community[i + 1..] {
                            counts[pair_slot(n, u, v)] += 1;
                        }
                    }
                }
            }
            CoMembership::BothClusters => {
                for b in bips {
                    let m = b.membership(n);
                    for u in 0..n {
                        let row = pair_slot(n, u, u + 1);
                        for v in u + 1..n {
                            if m[u] == m[v] {
                                counts[row + (v - u - 1)] += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            n,
            total: bips.len(),
            counts,
        })
    }

    pub fn count(&self, u: usize, v: usize) -> usize {
        let (a, b) = (u.min(v), u.max(v));
        self.counts[pair_slot(self.n, a, b)] as usize
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

fn pair_slot(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v <= n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Builds the thresholded consensus graph over `labels`.
///
/// Pairs are linked iff their co-membership count is positive and
/// `count / |bips| >= tau`. Pairs need not be adjacent in the input graph.
pub fn build_consensus(
    labels: &[String],
    bips: &[Bipartition],
    cfg: &ConsensusConfig,
) -> Result<Graph, ConsensusError> {
    if bips.is_empty() {
        return Err(ConsensusError::Empty);
    }
    if !(0.0..=1.0).contains(&cfg.tau) {
        return Err(ConsensusError::InvalidThreshold(cfg.tau));
    }
    let n = labels.len();
    let counts = PairCounts::new(n, bips, cfg.mode)?;
    let total = bips.len() as f64;
    let mut b = GraphBuilder::with_labels(labels.iter().cloned())?;
    for u in 0..n {
        for v in u + 1..n {
            let c = counts.count(u, v);
            if c == 0 {
                continue;
            }
            let w = c as f64 / total;
            if w >= cfg.tau {
                b.add_edge(u, v, w)?;
            }
        }
    }
    Ok(b.build())
}
