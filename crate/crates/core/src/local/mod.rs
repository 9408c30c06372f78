//! Ego-centered community of a seed node by ensemble-ranked greedy expansion.
//!
//! Starting from `{seed}`, every frontier node is scored by each active local
//! modularity as if it were added. Each metric ranks the frontier (value
//! descending, index ascending), the rankings are combined with a Borda
//! count, and the winner joins the community if it strictly improves enough
//! of the metrics under the configured [`AcceptRule`]. Expansion stops at the
//! first rejection, on an empty frontier, or at `max_size`.

mod borda;
mod metrics;
mod state;

pub use borda::{borda_aggregate, Scored};
pub use metrics::{metric_l, metric_m, metric_r, MetricId};
pub use state::{CommunityStats, LocalCommunityState};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::consensus::Bipartition;
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum LocalError {
    #[error("seed index {seed} out of range for graph with {n} nodes")]
    InvalidSeed { seed: usize, n: usize },
    #[error("the active metric set is empty")]
    NoMetrics,
    #[error("unknown local metric {0:?} (expected r, m or l)")]
    UnknownMetric(String),
    #[error("unknown acceptance rule {0:?} (expected majority, any or all)")]
    UnknownAcceptRule(String),
    #[error("rankings do not order the same candidate set")]
    MismatchedRankings,
    #[error("no candidates to rank")]
    EmptyRanking,
}

/// How many active metrics a candidate must strictly improve to be accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AcceptRule {
    /// More than half of them.
    #[default]
    Majority,
    Any,
    All,
}

impl AcceptRule {
    pub fn accepts(self, improved: usize, active: usize) -> bool {
        match self {
            AcceptRule::Majority => 2 * improved > active,
            AcceptRule::Any => improved >= 1,
            AcceptRule::All => improved == active,
        }
    }
}

impl fmt::Display for AcceptRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcceptRule::Majority => "majority",
            AcceptRule::Any => "any",
            AcceptRule::All => "all",
        })
    }
}

impl FromStr for AcceptRule {
    type Err = LocalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "majority" => Ok(AcceptRule::Majority),
            "any" => Ok(AcceptRule::Any),
            "all" => Ok(AcceptRule::All),
            other => Err(LocalError::UnknownAcceptRule(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalConfig {
    pub metrics: Vec<MetricId>,
    pub accept: AcceptRule,
    /// Stop growing once the community reaches this many nodes. `None` means no cap.
    pub max_size: Option<usize>,
}

impl Default for LocalConfig {
    fn default() -> Self {
        Self {
            metrics: MetricId::ALL.to_vec(),
            accept: AcceptRule::Majority,
            max_size: None,
        }
    }
}

/// Parses a comma-separated metric list such as `r,m,l`.
pub fn parse_metric_list(s: &str) -> Result<Vec<MetricId>, LocalError> {
    let mut out = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<MetricId>, _>>()?;
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(LocalError::NoMetrics);
    }
    Ok(out)
}

fn metric_values(metrics: &[MetricId], stats: &CommunityStats) -> Vec<f64> {
    metrics.iter().map(|m| m.evaluate(stats)).collect()
}

/// Grows the local community of `seed`; see the module docs for the procedure.
pub fn expand_local_community(
    g: &Graph,
    seed: usize,
    cfg: &LocalConfig,
) -> Result<Bipartition, LocalError> {
    let n = g.node_count();
    if seed >= n {
        return Err(LocalError::InvalidSeed { seed, n });
    }
    let mut metrics = cfg.metrics.clone();
    metrics.sort_unstable();
    metrics.dedup();
    if metrics.is_empty() {
        return Err(LocalError::NoMetrics);
    }
    let cap = cfg.max_size.unwrap_or(n);

    let mut state = LocalCommunityState::new(g, seed);
    let mut current = metric_values(&metrics, &state.stats());
    while state.size() < cap {
        let frontier = state.frontier();
        if frontier.is_empty() {
            break;
        }
        let mut values: Vec<Vec<f64>> = frontier
            .iter()
            .map(|&u| metric_values(&metrics, &state.stats_with(u)))
            .collect();
        let rankings: Vec<Vec<usize>> = (0..metrics.len())
            .map(|k| {
                let mut order: Vec<usize> = (0..frontier.len()).collect();
                order.sort_by(|&a, &b| {
                    values[b][k]
                        .total_cmp(&values[a][k])
                        .then(frontier[a].cmp(&frontier[b]))
                });
                order.into_iter().map(|i| frontier[i]).collect()
            })
            .collect();
        let winner = borda_aggregate(&rankings)?[0].node;
        let slot = frontier
            .binary_search(&winner)
            .expect("winner is a frontier node");
        let improved = values[slot]
            .iter()
            .zip(&current)
            .filter(|(new, old)| new > old)
            .count();
        if !cfg.accept.accepts(improved, metrics.len()) {
            break;
        }
        state.add(winner);
        current = values.swap_remove(slot);
    }

    Ok(Bipartition::new(seed, state.members().to_vec()).expect("seed is a member"))
}
