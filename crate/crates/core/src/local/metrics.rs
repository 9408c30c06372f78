//! Local modularities of a node set, computed from its [`CommunityStats`].
//!
//! Unbounded values are reported as `f64::INFINITY`, which orders above
//! every finite value and is never strictly greater than itself.

use std::fmt;
use std::str::FromStr;

use super::state::CommunityStats;
use super::LocalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    /// Boundary sharpness: `b_in / (b_in + e_out)`.
    R,
    /// Internal to external edge weight: `e_in / e_out`.
    M,
    /// Average internal degree over average boundary external degree.
    L,
}

impl MetricId {
    pub const ALL: [MetricId; 3] = [MetricId::R, MetricId::M, MetricId::L];

    pub fn evaluate(self, stats: &CommunityStats) -> f64 {
        match self {
            MetricId::R => metric_r(stats),
            MetricId::M => metric_m(stats),
            MetricId::L => metric_l(stats),
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricId::R => "r",
            MetricId::M => "m",
            MetricId::L => "l",
        })
    }
}

impl FromStr for MetricId {
    type Err = LocalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r" => Ok(MetricId::R),
            "m" => Ok(MetricId::M),
            "l" => Ok(MetricId::L),
            other => Err(LocalError::UnknownMetric(other.to_owned())),
        }
    }
}

/// 1 when nothing crosses the boundary.
pub fn metric_r(s: &CommunityStats) -> f64 {
    let denom = s.b_in + s.e_out;
    if denom == 0.0 {
        1.0
    } else {
        s.b_in / denom
    }
}

pub fn metric_m(s: &CommunityStats) -> f64 {
    if s.e_out == 0.0 {
        f64::INFINITY
    } else {
        s.e_in / s.e_out
    }
}

pub fn metric_l(s: &CommunityStats) -> f64 {
    let l_in = 2.0 * s.e_in / s.size as f64;
    if l_in == 0.0 {
        return 0.0;
    }
    let l_ex = if s.boundary_size == 0 {
        0.0
    } else {
        s.e_out / s.boundary_size as f64
    };
    if l_ex == 0.0 {
        f64::INFINITY
    } else {
        l_in / l_ex
    }
}
