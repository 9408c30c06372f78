//! End-to-end runs: seeds, local communities, consensus graph, Louvain,
//! and scoring against a ground truth when one is available.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, RunConfig};
use crate::consensus::{build_consensus, Bipartition};
use crate::eval::{align_partition, dense_partition, nmi, LabeledPartition};
use crate::graph::{load_edge_list, EdgeListOptions, GmlDocument, Graph, Partition};
use crate::local::{expand_local_community, LocalConfig, LocalError};
use crate::louvain::{louvain_detailed, LouvainOutcome};
use crate::seeding::{select_seeds, SeedSet};

/// Pipeline stage an error originated from; used as the message prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    GraphCore,
    Seeding,
    LocalCommunity,
    Consensus,
    Louvain,
    Eval,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::GraphCore => "graph-core",
            Stage::Seeding => "seeding",
            Stage::LocalCommunity => "local-community",
            Stage::Consensus => "consensus",
            Stage::Louvain => "louvain",
            Stage::Eval => "eval",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad settings or usage.
    Config,
    /// Unreadable, malformed or inconsistent input data.
    Data,
    /// A result violated an invariant the pipeline guarantees.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub kind: ErrorKind,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: Stage, kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            stage,
            kind,
            message: message.into(),
        }
    }

    fn data(stage: Stage, e: impl fmt::Display) -> Self {
        Self::new(stage, ErrorKind::Data, e.to_string())
    }

    fn internal(stage: Stage, e: impl fmt::Display) -> Self {
        Self::new(stage, ErrorKind::Internal, e.to_string())
    }
}

impl From<ConfigError> for PipelineError {
    fn from(e: ConfigError) -> Self {
        Self::new(Stage::Config, ErrorKind::Config, e.to_string())
    }
}

/// Wall-clock time per stage in milliseconds. Excluded from determinism checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub load_ms: f64,
    pub seeding_ms: f64,
    pub local_ms: f64,
    pub consensus_ms: f64,
    pub louvain_ms: f64,
    pub baseline_ms: f64,
    pub eval_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub dataset: String,
    pub config: std::collections::BTreeMap<String, String>,
    pub node_count: usize,
    pub edge_count: usize,
    pub seeds_used: Vec<String>,
    pub community_count: usize,
    pub consensus_edge_count: usize,
    /// Modularity of the final partition on the consensus graph; absent when it has no edges.
    pub consensus_modularity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub yasca_nmi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_nmi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_community_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_modularity: Option<f64>,
    pub timings: Timings,
}

impl RunResult {
    /// The result document without the `timings` section.
    pub fn stable_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("result is serializable");
        if let Some(map) = v.as_object_mut() {
            map.remove("timings");
        }
        v
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub result: RunResult,
    pub seeds: SeedSet,
    pub bipartitions: Vec<Bipartition>,
    pub consensus: Graph,
    pub partition: Partition,
    pub labeled: LabeledPartition,
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Loads a graph, choosing GML or edge-list format by file extension.
pub fn load_graph(path: &Path, allow_self_loops: bool) -> Result<Graph, PipelineError> {
    let opts = EdgeListOptions { allow_self_loops };
    let file = File::open(path).map_err(|e| {
        PipelineError::data(
            Stage::GraphCore,
            format!("cannot open {}: {e}", path.display()),
        )
    })?;
    let is_gml = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("gml"));
    let loaded = if is_gml {
        crate::graph::load_gml(BufReader::new(file), opts)
    } else {
        load_edge_list(BufReader::new(file), opts)
    };
    loaded.map_err(|e| PipelineError::data(Stage::GraphCore, format!("{}: {e}", path.display())))
}

pub fn load_ground_truth(path: &Path) -> Result<LabeledPartition, PipelineError> {
    let file = File::open(path).map_err(|e| {
        PipelineError::data(Stage::Eval, format!("cannot open {}: {e}", path.display()))
    })?;
    LabeledPartition::read(BufReader::new(file))
        .map_err(|e| PipelineError::data(Stage::Eval, format!("{}: {e}", path.display())))
}

/// Ground truth stored as a node attribute of a GML file.
pub fn gml_ground_truth(path: &Path, attribute: &str) -> Result<LabeledPartition, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| {
        PipelineError::data(
            Stage::GraphCore,
            format!("cannot open {}: {e}", path.display()),
        )
    })?;
    let doc = GmlDocument::parse(&text).map_err(|e| PipelineError::data(Stage::GraphCore, e))?;
    let mut truth = LabeledPartition::new();
    for (node, community) in doc
        .node_attribute(attribute)
        .map_err(|e| PipelineError::data(Stage::GraphCore, e))?
    {
        truth.insert(node, community);
    }
    Ok(truth)
}

/// One local community per seed, in seed order. Runs on `workers` threads;
/// the result does not depend on the thread count.
pub fn local_communities(
    g: &Graph,
    seeds: &SeedSet,
    cfg: &LocalConfig,
    workers: usize,
) -> Result<Vec<Bipartition>, PipelineError> {
    let to_err = |e: LocalError| PipelineError::data(Stage::LocalCommunity, e);
    if workers <= 1 {
        return seeds
            .iter()
            .map(|s| expand_local_community(g, s, cfg))
            .collect::<Result<_, _>>()
            .map_err(to_err);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PipelineError::internal(Stage::LocalCommunity, e))?;
    pool.install(|| {
        seeds
            .as_slice()
            .par_iter()
            .map(|&s| expand_local_community(g, s, cfg))
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(to_err)
}

/// Runs every stage on an already loaded graph. No files are touched.
pub fn run_on_graph(
    g: &Graph,
    truth: Option<&LabeledPartition>,
    dataset: &str,
    cfg: &RunConfig,
) -> Result<RunReport, PipelineError> {
    let started = Instant::now();
    let mut timings = Timings::default();
    if cfg.workers == 0 {
        return Err(ConfigError::InvalidValue {
            key: "run.workers".into(),
            value: "0".into(),
            reason: "at least one worker is required".into(),
        }
        .into());
    }

    let truth_partition = truth
        .map(|t| dense_partition(t, g.labels()))
        .transpose()
        .map_err(|e| {
            PipelineError::data(
                Stage::Eval,
                format!("ground truth does not match the graph: {e}"),
            )
        })?;

    let t = Instant::now();
    let seeds = select_seeds(g, &cfg.seed).map_err(|e| PipelineError::data(Stage::Seeding, e))?;
    timings.seeding_ms = millis(t);
    if seeds.is_empty() {
        return Err(PipelineError::new(
            Stage::Seeding,
            ErrorKind::Config,
            "the seed configuration selects no nodes",
        ));
    }

    let t = Instant::now();
    let bipartitions = local_communities(g, &seeds, &cfg.local, cfg.workers)?;
    timings.local_ms = millis(t);

    let t = Instant::now();
    let consensus = build_consensus(g.labels(), &bipartitions, &cfg.consensus)
        .map_err(|e| PipelineError::data(Stage::Consensus, e))?;
    timings.consensus_ms = millis(t);

    let t = Instant::now();
    if consensus.edge_count() == 0 {
        log::warn!("{dataset}: consensus graph has no edges; every node becomes its own community");
    }
    let outcome: LouvainOutcome = louvain_detailed(&consensus, &cfg.louvain)
        .map_err(|e| PipelineError::data(Stage::Louvain, e))?;
    timings.louvain_ms = millis(t);
    let partition = outcome.partition;
    if partition.len() != g.node_count() {
        return Err(PipelineError::internal(
            Stage::Louvain,
            format!(
                "partition covers {} of {} nodes",
                partition.len(),
                g.node_count()
            ),
        ));
    }

    let mut baseline = None;
    if cfg.baseline_louvain {
        let t = Instant::now();
        baseline = Some(
            louvain_detailed(g, &cfg.louvain)
                .map_err(|e| PipelineError::data(Stage::Louvain, e))?,
        );
        timings.baseline_ms = millis(t);
    }

    let t = Instant::now();
    let score = |p: &Partition| -> Result<Option<f64>, PipelineError> {
        let Some(truth) = &truth_partition else {
            return Ok(None);
        };
        let v = nmi(p, truth).map_err(|e| PipelineError::internal(Stage::Eval, e))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(PipelineError::internal(
                Stage::Eval,
                format!("NMI {v} outside [0, 1]"),
            ));
        }
        Ok(Some(v))
    };
    let yasca_nmi = score(&partition)?;
    let baseline_nmi = match &baseline {
        Some(b) => score(&b.partition)?,
        None => None,
    };
    let labeled = align_partition(&partition, g.labels())
        .map_err(|e| PipelineError::internal(Stage::Eval, e))?;
    timings.eval_ms = millis(t);
    timings.total_ms = millis(started);

    let result = RunResult {
        dataset: dataset.to_owned(),
        config: cfg.echo(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        seeds_used: seeds.iter().map(|s| g.label(s).to_owned()).collect(),
        community_count: partition.community_count(),
        consensus_edge_count: consensus.edge_count(),
        consensus_modularity: outcome.modularity,
        yasca_nmi,
        baseline_nmi,
        baseline_community_count: baseline.as_ref().map(|b| b.partition.community_count()),
        baseline_modularity: baseline.as_ref().and_then(|b| b.modularity),
        timings,
    };
    Ok(RunReport {
        result,
        seeds,
        bipartitions,
        consensus,
        partition,
        labeled,
    })
}

/// Name used for a dataset in results: the graph file's stem.
pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".to_owned())
}

/// Loads the inputs named in `cfg`, runs the pipeline and, if an output
/// directory is set, writes `partition.tsv`, `result.json` and (on request)
/// `plot.csv` into it.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport, PipelineError> {
    let started = Instant::now();
    let path = cfg
        .graph_path
        .as_deref()
        .ok_or(ConfigError::Missing("run.graph"))?;
    let g = load_graph(path, cfg.allow_self_loops)?;
    let truth = match (&cfg.ground_truth_path, &cfg.truth_attribute) {
        (Some(p), _) => Some(load_ground_truth(p)?),
        (None, Some(attr)) => Some(gml_ground_truth(path, attr)?),
        (None, None) => None,
    };
    let load_ms = millis(started);
    let mut report = run_on_graph(&g, truth.as_ref(), &dataset_name(path), cfg)?;
    report.result.timings.load_ms = load_ms;
    report.result.timings.total_ms += load_ms;
    if let Some(dir) = &cfg.output_dir {
        write_outputs(&report, g.labels(), dir, cfg.emit_plot_data)?;
    }
    Ok(report)
}

fn io_err(path: &Path, e: impl fmt::Display) -> PipelineError {
    PipelineError::data(
        Stage::Output,
        format!("cannot write {}: {e}", path.display()),
    )
}

/// Writes the partition, the result document and optionally the plot CSV.
pub fn write_outputs(
    report: &RunReport,
    labels: &[String],
    dir: &Path,
    plot: bool,
) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let part_path = dir.join("partition.tsv");
    let mut out = BufWriter::new(File::create(&part_path).map_err(|e| io_err(&part_path, e))?);
    report
        .labeled
        .write_ordered(labels, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| io_err(&part_path, e))?;

    let result_path = dir.join("result.json");
    let json = serde_json::to_string_pretty(&report.result).expect("result is serializable");
    fs::write(&result_path, json + "\n").map_err(|e| io_err(&result_path, e))?;

    if plot {
        emit_plot_data(std::slice::from_ref(&report.result), &dir.join("plot.csv"))?;
    }
    Ok(())
}

/// Writes `algorithm,dataset,nmi` rows: one `yasca` row per scored result
/// and one `louvain-baseline` row where a baseline score exists.
pub fn emit_plot_data(results: &[RunResult], path: &Path) -> Result<(), PipelineError> {
    if results.is_empty() {
        return Err(PipelineError::new(
            Stage::Output,
            ErrorKind::Config,
            "no results to plot",
        ));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(["algorithm", "dataset", "nmi"])
        .map_err(|e| io_err(path, e))?;
    for r in results {
        for (algorithm, score) in [("yasca", r.yasca_nmi), ("louvain-baseline", r.baseline_nmi)] {
            if let Some(v) = score {
                w.write_record([algorithm, r.dataset.as_str(), v.to_string().as_str()])
                    .map_err(|e| io_err(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}
