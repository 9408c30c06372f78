//! Run configuration as flat `section.key = value` settings.
//!
//! The same keys are accepted from a config file and from command-line
//! flags; in flag form dashes may replace underscores (`seed.p-high`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

use crate::consensus::ConsensusConfig;
use crate::local::{parse_metric_list, LocalConfig};
use crate::louvain::LouvainConfig;
use crate::seeding::SeedConfig;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for {key}: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("missing required setting {0}")]
    Missing(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph_path: Option<PathBuf>,
    pub ground_truth_path: Option<PathBuf>,
    /// Read the ground truth from this node attribute of a GML input instead of a file.
    pub truth_attribute: Option<String>,
    pub allow_self_loops: bool,
    pub seed: SeedConfig,
    pub local: LocalConfig,
    pub consensus: ConsensusConfig,
    pub louvain: LouvainConfig,
    pub output_dir: Option<PathBuf>,
    pub emit_plot_data: bool,
    pub baseline_louvain: bool,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            graph_path: None,
            ground_truth_path: None,
            truth_attribute: None,
            allow_self_loops: false,
            seed: SeedConfig::default(),
            local: LocalConfig::default(),
            consensus: ConsensusConfig::default(),
            louvain: LouvainConfig::default(),
            output_dir: None,
            emit_plot_data: false,
            baseline_louvain: false,
            workers: 1,
        }
    }
}

/// Canonical form of a key: dashes after the section become underscores,
/// and the bare run-level flag names map into the `run` section.
pub fn canonical_key(key: &str) -> String {
    let key = key.trim().trim_start_matches("--");
    let key = match key.split_once('.') {
        Some((section, rest)) => format!("{section}.{}", rest.replace('-', "_")),
        None => format!("run.{}", key.replace('-', "_")),
    };
    match key.as_str() {
        "run.out" | "run.output" => "run.output_dir".to_owned(),
        _ => key,
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| ConfigError::InvalidValue {
            key: key.to_owned(),
            value: value.to_owned(),
            reason: e.to_string(),
        })
}

fn parse_fraction(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = parse(key, value)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ConfigError::InvalidValue {
            key: key.to_owned(),
            value: value.to_owned(),
            reason: "must lie in [0, 1]".into(),
        })
    }
}

fn parse_optional_count(key: &str, value: &str) -> Result<Option<usize>, ConfigError> {
    match value.trim() {
        "" | "none" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(ConfigError::InvalidValue {
            key: key.to_owned(),
            value: value.to_owned(),
            reason: "expected true or false".into(),
        }),
    }
}

impl RunConfig {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = canonical_key(key);
        let k = key.as_str();
        let v = value.trim();
        match k {
            "run.graph" => self.graph_path = Some(PathBuf::from(v)),
            "run.ground_truth" => self.ground_truth_path = Some(PathBuf::from(v)),
            "run.truth_attribute" => self.truth_attribute = Some(v.to_owned()),
            "run.allow_self_loops" => self.allow_self_loops = parse_bool(k, v)?,
            "run.output_dir" => self.output_dir = Some(PathBuf::from(v)),
            "run.emit_plot_data" => self.emit_plot_data = parse_bool(k, v)?,
            "run.baseline_louvain" => self.baseline_louvain = parse_bool(k, v)?,
            "run.workers" => {
                let w: usize = parse(k, v)?;
                if w == 0 {
                    return Err(ConfigError::InvalidValue {
                        key,
                        value: value.to_owned(),
                        reason: "at least one worker is required".into(),
                    });
                }
                self.workers = w;
            }
            "seed.strategy" => self.seed.strategy = parse(k, v)?,
            "seed.p_high" => self.seed.p_high = parse_fraction(k, v)?,
            "seed.p_low" => self.seed.p_low = parse_fraction(k, v)?,
            "seed.k" => self.seed.k = parse_optional_count(k, v)?,
            "seed.rng_seed" => self.seed.rng_seed = parse(k, v)?,
            "local.metrics" => {
                self.local.metrics =
                    parse_metric_list(v).map_err(|e| ConfigError::InvalidValue {
                        key: key.clone(),
                        value: value.to_owned(),
                        reason: e.to_string(),
                    })?
            }
            "local.accept" => self.local.accept = parse(k, v)?,
            "local.max_size" => self.local.max_size = parse_optional_count(k, v)?,
            "consensus.tau" => self.consensus.tau = parse_fraction(k, v)?,
            "consensus.mode" => self.consensus.mode = parse(k, v)?,
            "louvain.rng_seed" => self.louvain.rng_seed = parse(k, v)?,
            "louvain.max_passes" => {
                let p: usize = parse(k, v)?;
                if p == 0 {
                    return Err(ConfigError::InvalidValue {
                        key,
                        value: value.to_owned(),
                        reason: "must be positive".into(),
                    });
                }
                self.louvain.max_passes = p;
            }
            "louvain.min_gain" => {
                let g: f64 = parse(k, v)?;
                if g.is_nan() || g < 0.0 {
                    return Err(ConfigError::InvalidValue {
                        key,
                        value: value.to_owned(),
                        reason: "must be non-negative".into(),
                    });
                }
                self.louvain.min_gain = g;
            }
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Applies every `key = value` line of a config file. `#` starts a comment line.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// The algorithmic settings as canonical `key -> value` pairs. Paths
    /// and worker count are left out: they do not affect the result.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let metrics = self
            .local
            .metrics
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let opt = |v: Option<usize>| v.map_or_else(|| "none".to_owned(), |x| x.to_string());
        [
            ("seed.strategy", self.seed.strategy.to_string()),
            ("seed.p_high", self.seed.p_high.to_string()),
            ("seed.p_low", self.seed.p_low.to_string()),
            ("seed.k", opt(self.seed.k)),
            ("seed.rng_seed", self.seed.rng_seed.to_string()),
            ("local.metrics", metrics),
            ("local.accept", self.local.accept.to_string()),
            ("local.max_size", opt(self.local.max_size)),
            ("consensus.tau", self.consensus.tau.to_string()),
            ("consensus.mode", self.consensus.mode.to_string()),
            ("louvain.rng_seed", self.louvain.rng_seed.to_string()),
            ("louvain.max_passes", self.louvain.max_passes.to_string()),
            ("louvain.min_gain", self.louvain.min_gain.to_string()),
            ("run.allow_self_loops", self.allow_self_loops.to_string()),
            ("run.baseline_louvain", self.baseline_louvain.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consensus::CoMembership;
    use crate::local::{AcceptRule, MetricId};
    use crate::seeding::SeedStrategy;

    #[test]
    fn keys_in_flag_and_file_form() {
        assert_eq!(canonical_key("--seed.p-high"), "seed.p_high");
        assert_eq!(canonical_key("seed.p_high"), "seed.p_high");
        assert_eq!(canonical_key("--ground-truth"), "run.ground_truth");
        assert_eq!(canonical_key("out"), "run.output_dir");
    }

    #[test]
    fn config_file() {
        let mut cfg = RunConfig::default();
        cfg.apply_text(
            "# experiment\nseed.strategy = all\nconsensus.tau = 0.75\nconsensus.mode = community-only\n\
             local.metrics = r,m\nlocal.accept = any\nlouvain.rng-seed = 9\nworkers = 4\n",
        )
        .unwrap();
        assert_eq!(cfg.seed.strategy, SeedStrategy::All);
        assert_eq!(cfg.consensus.tau, 0.75);
        assert_eq!(cfg.consensus.mode, CoMembership::CommunityOnly);
        assert_eq!(cfg.local.metrics, vec![MetricId::R, MetricId::M]);
        assert_eq!(cfg.local.accept, AcceptRule::Any);
        assert_eq!(cfg.louvain.rng_seed, 9);
        assert_eq!(cfg.workers, 4);
        assert_eq!(cfg.echo()["consensus.mode"], "community-only");
    }

    #[test]
    fn rejects_bad_settings() {
        let mut cfg = RunConfig::default();
        assert!(matches!(
            cfg.set("seed.colour", "red"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(
            cfg.set("consensus.tau", "1.5"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            cfg.set("workers", "0"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            cfg.set("seed.strategy", "pagerank"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            cfg.set("local.metrics", ""),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert_eq!(
            cfg.apply_text("tau 0.5"),
            Err(ConfigError::Syntax { line: 1 })
        );
    }
}
