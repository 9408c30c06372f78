//! Seed selection.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use thiserror::Error;

use crate::graph::Graph;
use crate::rng;

#[derive(Debug, Error, PartialEq)]
pub enum SeedError {
    #[error("cannot select seeds from an empty graph")]
    EmptyGraph,
    #[error("requested {k} random seeds but the graph has only {n} nodes")]
    TooManySeeds { k: usize, n: usize },
    #[error("the random strategy needs a seed count (seed.k)")]
    MissingCount,
    #[error("{name} = {value} is outside [0, 1]")]
    InvalidFraction { name: &'static str, value: f64 },
    #[error("unknown seed strategy {0:?} (expected degree-extremes, random or all)")]
    UnknownStrategy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedStrategy {
    /// The highest- and lowest-degree fractions of the nodes.
    #[default]
    DegreeExtremes,
    /// `k` nodes drawn uniformly without replacement.
    Random,
    All,
}

impl fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeedStrategy::DegreeExtremes => "degree-extremes",
            SeedStrategy::Random => "random",
            SeedStrategy::All => "all",
        })
    }
}

impl FromStr for SeedStrategy {
    type Err = SeedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree-extremes" => Ok(SeedStrategy::DegreeExtremes),
            "random" => Ok(SeedStrategy::Random),
            "all" => Ok(SeedStrategy::All),
            other => Err(SeedError::UnknownStrategy(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedConfig {
    pub strategy: SeedStrategy,
    pub p_high: f64,
    pub p_low: f64,
    /// Seed count for [`SeedStrategy::Random`].
    pub k: Option<usize>,
    pub rng_seed: u64,
}

impl Default for SeedConfig {
    fn default() -> Self {
        Self {
            strategy: SeedStrategy::DegreeExtremes,
            p_high: 0.25,
            p_low: 0.25,
            k: None,
            rng_seed: 0,
        }
    }
}

impl SeedConfig {
    pub fn validate(&self) -> Result<(), SeedError> {
        for (name, value) in [("seed.p_high", self.p_high), ("seed.p_low", self.p_low)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SeedError::InvalidFraction { name, value });
            }
        }
        Ok(())
    }
}

/// Distinct seed node indices in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet(Vec<usize>);

impl SeedSet {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    fn from_unsorted(mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        SeedSet(nodes)
    }
}

/// Number of nodes a fraction selects: `ceil(p * n)`, ignoring float dust
/// so that e.g. `0.1 * 30` gives 3 rather than 4.
pub(crate) fn fraction_count(p: f64, n: usize) -> usize {
    let exact = p * n as f64;
    let rounded = exact.round();
    let count = if (exact - rounded).abs() < 1e-9 {
        rounded
    } else {
        exact.ceil()
    };
    (count.max(0.0) as usize).min(n)
}

pub fn select_seeds(g: &Graph, cfg: &SeedConfig) -> Result<SeedSet, SeedError> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(SeedError::EmptyGraph);
    }
    match cfg.strategy {
        SeedStrategy::All => Ok(SeedSet((0..n).collect())),
        SeedStrategy::Random => {
            let k = cfg.k.ok_or(SeedError::MissingCount)?;
            if k > n {
                return Err(SeedError::TooManySeeds { k, n });
            }
            let mut rng = rng::seeded(cfg.rng_seed);
            Ok(SeedSet::from_unsorted(
                index::sample(&mut rng, n, k).into_vec(),
            ))
        }
        SeedStrategy::DegreeExtremes => {
            let degrees = g.degrees();
            let by_degree = |a: &usize, b: &usize| {
                degrees[*a]
                    .partial_cmp(&degrees[*b])
                    .unwrap_or(Ordering::Equal)
            };
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|a, b| by_degree(b, a).then(a.cmp(b)));
            let mut chosen: Vec<usize> = order[..fraction_count(cfg.p_high, n)].to_vec();
            order.sort_by(|a, b| by_degree(a, b).then(a.cmp(b)));
            chosen.extend_from_slice(&order[..fraction_count(cfg.p_low, n)]);
            Ok(SeedSet::from_unsorted(chosen))
        }
    }
}
