//! Undirected weighted graphs over dense node indices.
//!
//! Every algorithm in this crate works on `usize` indices `0..n`; the
//! external string labels are kept alongside so results can be mapped back
//! to whatever identifiers the input file used. Graphs are immutable once
//! built and can be shared freely between threads.

mod edge_list;
mod gml;

pub use edge_list::{load_edge_list, write_edge_list, EdgeListOptions};
pub use gml::{load_gml, GmlDocument, GmlEntry, GmlValue};

use std::collections::HashMap;

use thiserror::Error;

/// Errors raised while building, loading or querying a [`Graph`].
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate edge {u} -- {v}")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("duplicate edge {u} -- {v}")]
    DuplicateEdgeUnlocated { u: String, v: String },
    #[error("line {line}: self-loop on {node} (pass allow_self_loops to accept it)")]
    SelfLoop { line: usize, node: String },
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("edge references unknown node id {0}")]
    UnknownNode(String),
    #[error("unbalanced brackets: {0}")]
    UnbalancedBrackets(String),
    #[error("invalid weight {weight} for edge {u} -- {v}: weights must be positive and finite")]
    InvalidWeight { u: String, v: String, weight: f64 },
    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Undirected weighted graph with a label map.
///
/// Adjacency lists never contain self entries; a node's self-loop weight is
/// stored separately because Louvain's aggregated graphs need it.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    total_weight: f64,
    edge_count: usize,
}

impl Graph {
    /// Graph with `labels.len()` nodes and no edges.
    pub fn edgeless(labels: Vec<String>) -> Result<Self, GraphError> {
        GraphBuilder::with_labels(labels).map(GraphBuilder::build)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct non-loop edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Total edge weight `m`: every distinct edge and every self-loop counted once.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Neighbors of `u` as `(index, weight)` pairs sorted by index, excluding `u` itself.
    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }

    pub fn self_loop_weight(&self, u: usize) -> f64 {
        self.self_loops[u]
    }

    /// Weight of edge `u -- v`, or `None` if absent. `u == v` looks up the self-loop.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        if u == v {
            let w = self.self_loops[u];
            return (w > 0.0).then_some(w);
        }
        self.adjacency[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.adjacency[u][i].1)
    }

    /// Weighted degree; a self-loop contributes twice its weight.
    pub fn degree(&self, u: usize) -> Result<f64, GraphError> {
        self.check(u)?;
        Ok(self.degree_unchecked(u))
    }

    /// Number of distinct neighbors other than `u` itself.
    pub fn neighbor_count(&self, u: usize) -> Result<usize, GraphError> {
        self.check(u)?;
        Ok(self.adjacency[u].len())
    }

    pub(crate) fn degree_unchecked(&self, u: usize) -> f64 {
        self.adjacency[u].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[u]
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.node_count())
            .map(|u| self.degree_unchecked(u))
            .collect()
    }

    /// Each undirected non-loop edge once, as `(u, v, w)` with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            adj.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    fn check(&self, u: usize) -> Result<(), GraphError> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                index: u,
                n: self.node_count(),
            })
        }
    }
}

/// Incremental constructor for [`Graph`]. Rejects duplicate edges and
/// non-positive weights; the finished graph is always symmetric.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: HashMap<(usize, usize), f64>,
    self_loops: Vec<f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_labels<I, S>(labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut b = Self::new();
        for label in labels {
            let label = label.into();
            if b.index.contains_key(&label) {
                return Err(GraphError::DuplicateLabel(label));
            }
            b.intern(&label);
        }
        Ok(b)
    }

    /// Index of `label`, adding a new node on first sight.
    pub fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        self.self_loops.push(0.0);
        i
    }

    /// Adds a node that must not exist yet.
    pub fn add_node(&mut self, label: &str) -> Result<usize, GraphError> {
        if self.index.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_owned()));
        }
        Ok(self.intern(label))
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Adds `u -- v` with weight `w`; `u == v` sets the self-loop weight.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<(), GraphError> {
        let n = self.labels.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::NodeOutOfRange { index: x, n });
            }
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(GraphError::InvalidWeight {
                u: self.labels[u].clone(),
                v: self.labels[v].clone(),
                weight: w,
            });
        }
        let duplicate = || GraphError::DuplicateEdgeUnlocated {
            u: self.labels[u].clone(),
            v: self.labels[v].clone(),
        };
        if u == v {
            if self.self_loops[u] > 0.0 {
                return Err(duplicate());
            }
            self.self_loops[u] = w;
            return Ok(());
        }
        let key = (u.min(v), u.max(v));
        if self.edges.contains_key(&key) {
            return Err(duplicate());
        }
        self.edges.insert(key, w);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            return self.self_loops.get(u).is_some_and(|&w| w > 0.0);
        }
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn build(self) -> Graph {
        let n = self.labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut keys: Vec<_> = self.edges.into_iter().collect();
        keys.sort_by_key(|&(k, _)| k);
        let mut total_weight = 0.0;
        for &((u, v), w) in &keys {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            total_weight += w;
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(x, _)| x);
        }
        total_weight += self.self_loops.iter().sum::<f64>();
        Graph {
            labels: self.labels,
            index: self.index,
            adjacency,
            self_loops: self.self_loops,
            total_weight,
            edge_count: keys.len(),
        }
    }
}

/// Assignment of every node to exactly one community.
///
/// Community ids are always normalized: `0..community_count`, numbered by
/// first appearance in node order. Two partitions describing the same
/// grouping therefore compare equal regardless of the ids they were built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Builds a partition from arbitrary community ids, renumbering them.
    pub fn from_assignment<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let assignment: Vec<usize> = ids
            .into_iter()
            .map(|c| {
                let next = remap.len();
                *remap.entry(c).or_insert(next)
            })
            .collect();
        Self {
            community_count: remap.len(),
            assignment,
        }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            community_count: n,
        }
    }

    pub fn from_communities(n: usize, communities: &[Vec<usize>]) -> Option<Self> {
        let mut ids = vec![usize::MAX; n];
        for (c, members) in communities.iter().enumerate() {
            for &u in members {
                if u >= n || ids[u] != usize::MAX {
                    return None;
                }
                ids[u] = c;
            }
        }
        ids.iter()
            .all(|&c| c != usize::MAX)
            .then(|| Self::from_assignment(ids))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn community_of(&self, u: usize) -> usize {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of each community, in ascending node order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (u, &c) in self.assignment.iter().enumerate() {
            out[c].push(u);
        }
        out
    }
}
