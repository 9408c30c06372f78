//! Canonical sources for the classic benchmark networks, and structural
//! checks for locally downloaded copies.
//!
//! The networks are not bundled. A downloaded file is accepted when its node
//! count, edge count and (where recorded) degree-sequence digest match. The
//! digest is the SHA-256 of the ascending neighbor counts joined by commas,
//! which is independent of node labels and of the file format.

use sha2::{Digest, Sha256};

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetInfo {
    pub name: &'static str,
    pub file_name: &'static str,
    pub description: &'static str,
    pub url: &'static str,
    pub nodes: usize,
    pub edges: usize,
    pub ground_truth: &'static str,
    pub degree_digest: Option<&'static str>,
}

pub const CATALOG: [DatasetInfo; 3] = [
    DatasetInfo {
        name: "zachary",
        file_name: "karate.gml",
        description: "Zachary's karate club: friendships among 34 club members",
        url: "http://www-personal.umich.edu/~mejn/netdata/karate.zip",
        nodes: 34,
        edges: 78,
        ground_truth:
            "the two factions after the club split (Zachary 1977); not part of the GML file",
        degree_digest: Some("074109140b8fd9cc442e5d121273186307bc95213a4e1f33087a4d54c725a136"),
    },
    DatasetInfo {
        name: "dolphins",
        file_name: "dolphins.gml",
        description: "Frequent associations among 62 bottlenose dolphins, Doubtful Sound",
        url: "http://www-personal.umich.edu/~mejn/netdata/dolphins.zip",
        nodes: 62,
        edges: 159,
        ground_truth:
            "the two groups observed after a member left (Lusseau 2003); not part of the GML file",
        degree_digest: None,
    },
    DatasetInfo {
        name: "polbooks",
        file_name: "polbooks.gml",
        description: "Co-purchased books about US politics (V. Krebs)",
        url: "http://www-personal.umich.edu/~mejn/netdata/polbooks.zip",
        nodes: 105,
        edges: 441,
        ground_truth: "node attribute `value` (l = liberal, n = neutral, c = conservative)",
        degree_digest: None,
    },
];

pub fn find(name: &str) -> Option<&'static DatasetInfo> {
    CATALOG.iter().find(|d| d.name == name)
}

/// SHA-256 (hex) of the sorted neighbor counts of `g`, comma-joined.
pub fn degree_sequence_digest(g: &Graph) -> String {
    let mut degrees: Vec<usize> = (0..g.node_count()).map(|u| g.neighbors(u).len()).collect();
    degrees.sort_unstable();
    let text = degrees
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Mismatches between `g` and the catalog entry; empty when the file checks out.
pub fn verify(info: &DatasetInfo, g: &Graph) -> Vec<String> {
    let mut problems = Vec::new();
    if g.node_count() != info.nodes {
        problems.push(format!(
            "expected {} nodes, found {}",
            info.nodes,
            g.node_count()
        ));
    }
    if g.edge_count() != info.edges {
        problems.push(format!(
            "expected {} edges, found {}",
            info.edges,
            g.edge_count()
        ));
    }
    if let Some(expected) = info.degree_digest {
        let got = degree_sequence_digest(g);
        if got != expected {
            problems.push(format!(
                "degree-sequence digest {got} does not match {expected}"
            ));
        }
    }
    problems
}
