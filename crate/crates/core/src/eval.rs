//! Partition scoring against ground truth.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use rand::Rng;
use thiserror::Error;

use crate::graph::Partition;
use crate::rng;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("partitions cover {0} and {1} nodes")]
    SizeMismatch(usize, usize),
    #[error("cannot score empty partitions")]
    Empty,
    #[error("community count k = {k} must lie in 1..={n}")]
    InvalidCommunityCount { k: usize, n: usize },
    #[error("labels missing from the partition: {}", .0.join(", "))]
    MissingLabels(Vec<String>),
    #[error("labels not present in the graph: {}", .0.join(", "))]
    ExtraLabels(Vec<String>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for EvalError {
    fn from(e: std::io::Error) -> Self {
        EvalError::Io(e.to_string())
    }
}

/// Normalized mutual information with geometric-mean normalization,
/// `I(a; b) / sqrt(H(a) H(b))`, natural logarithms.
///
/// Two single-community partitions score 1; if exactly one of them has a
/// single community the score is 0. The result is symmetric bit for bit.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::SizeMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(EvalError::Empty);
    }
    // Fixed argument order makes the floating-point sums independent of call order.
    let (a, b) = if a.assignment() <= b.assignment() {
        (a, b)
    } else {
        (b, a)
    };

    let n = a.len() as f64;
    let (ka, kb) = (a.community_count(), b.community_count());
    let mut table = vec![0usize; ka * kb];
    for (&i, &j) in a.assignment().iter().zip(b.assignment()) {
        table[i * kb + j] += 1;
    }
    let row: Vec<usize> = (0..ka)
        .map(|i| table[i * kb..(i + 1) * kb].iter().sum())
        .collect();
    let col: Vec<usize> = (0..kb)
        .map(|j| (0..ka).map(|i| table[i * kb + j]).sum())
        .collect();

    let entropy = |sizes: &[usize]| -> f64 {
        -sizes
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let (ha, hb) = (entropy(&row), entropy(&col));
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let nij = table[i * kb + j];
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (n * nij / (row[i] as f64 * col[j] as f64)).ln();
            }
        }
    }
    Ok((mi / (ha * hb).sqrt()).clamp(0.0, 1.0))
}

/// Each of `n` nodes assigned uniformly at random to one of `k` labels;
/// labels left empty simply disappear after normalization.
pub fn random_partition(n: usize, k: usize, rng_seed: u64) -> Result<Partition, EvalError> {
    if k == 0 || k > n {
        return Err(EvalError::InvalidCommunityCount { k, n });
    }
    let mut rng = rng::seeded(rng_seed);
    Ok(Partition::from_assignment(
        (0..n).map(|_| rng.gen_range(0..k)),
    ))
}

/// Community label of every node, keyed by external node label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledPartition {
    entries: BTreeMap<String, String>,
}

impl LabeledPartition {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `node -> community`; returns false if `node` was already present.
    pub fn insert(&mut self, node: impl Into<String>, community: impl Into<String>) -> bool {
        use std::collections::btree_map::Entry;
        match self.entries.entry(node.into()) {
            Entry::Occupied(_) => false,
            Entry::Vacant(e) => {
                e.insert(community.into());
                true
            }
        }
    }

    pub fn get(&self, node: &str) -> Option<&str> {
        self.entries.get(node).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Node labels, sorted.
    pub fn nodes(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    /// Reads `node<TAB>community` lines; `#` starts a comment line.
    /// Any run of whitespace is accepted as the separator.
    pub fn read<R: BufRead>(reader: R) -> Result<Self, EvalError> {
        let mut out = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| EvalError::Parse {
                line: i + 1,
                message,
            };
            let (node, community) = match trimmed.split_once('\t') {
                Some((n, c)) => (n.trim(), c.trim()),
                None => {
                    let mut it = trimmed.split_whitespace();
                    let node = it.next().unwrap_or_default();
                    let rest: Vec<&str> = it.collect();
                    if rest.len() != 1 {
                        return Err(parse_err(format!(
                            "expected `node<TAB>community`, got {trimmed:?}"
                        )));
                    }
                    (node, rest[0])
                }
            };
            if node.is_empty() || community.is_empty() {
                return Err(parse_err(format!(
                    "expected `node<TAB>community`, got {trimmed:?}"
                )));
            }
            if !out.insert(node, community) {
                return Err(parse_err(format!("node {node:?} listed twice")));
            }
        }
        Ok(out)
    }

    /// Writes `node<TAB>community` lines in the order of `labels`.
    pub fn write_ordered<W: Write>(&self, labels: &[String], mut out: W) -> std::io::Result<()> {
        for label in labels {
            if let Some(c) = self.entries.get(label) {
                writeln!(out, "{label}\t{c}")?;
            }
        }
        Ok(())
    }
}

/// Labels a dense partition: node `i` is `labels[i]`, its community the decimal id.
pub fn align_partition(p: &Partition, labels: &[String]) -> Result<LabeledPartition, EvalError> {
    if p.len() != labels.len() {
        return Err(EvalError::SizeMismatch(p.len(), labels.len()));
    }
    let mut out = LabeledPartition::new();
    for (u, label) in labels.iter().enumerate() {
        if !out.insert(label.clone(), p.community_of(u).to_string()) {
            return Err(EvalError::Parse {
                line: 0,
                message: format!("duplicate node label {label:?}"),
            });
        }
    }
    Ok(out)
}

/// Inverse of [`align_partition`]: a dense partition over `labels`.
///
/// Fails if `lp` lacks any of `labels` or names nodes outside them; the
/// error lists the offending labels.
pub fn dense_partition(lp: &LabeledPartition, labels: &[String]) -> Result<Partition, EvalError> {
    let known: HashSet<&str> = labels.iter().map(String::as_str).collect();
    let extra: Vec<String> = lp
        .entries
        .keys()
        .filter(|k| !known.contains(k.as_str()))
        .cloned()
        .collect();
    if !extra.is_empty() {
        return Err(EvalError::ExtraLabels(extra));
    }
    let missing: Vec<String> = labels
        .iter()
        .filter(|l| !lp.entries.contains_key(*l))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingLabels(missing));
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    Ok(Partition::from_assignment(labels.iter().map(|l| {
        let c = lp.entries[l].as_str();
        let next = ids.len();
        *ids.entry(c).or_insert(next)
    })))
}
