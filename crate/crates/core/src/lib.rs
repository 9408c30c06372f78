//! Seed-centric community detection.
//!
//! The pipeline selects seed nodes, grows an ego-centered community around
//! each seed, reads every community as a two-block partition of the vertex
//! set, merges those partitions into a frequency-weighted consensus graph,
//! and partitions the consensus graph with Louvain.
//!
//! ```
//! use yasca::graph::{load_edge_list, EdgeListOptions};
//! use yasca::local::{expand_local_community, LocalConfig};
//!
//! let g = load_edge_list("a b\na c\nb c\nc d\nd e\nd f\ne f".as_bytes(), EdgeListOptions::default())?;
//! let community = expand_local_community(&g, 0, &LocalConfig::default())?;
//! assert_eq!(community.community(), &[0, 1, 2]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod config;
pub mod consensus;
pub mod datasets;
pub mod eval;
pub mod graph;
pub mod local;
pub mod louvain;
pub mod pipeline;
pub mod rng;
pub mod seeding;

pub use graph::{Graph, Partition};
