//! `yasca` command-line front end.

use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use yasca::config::RunConfig;
use yasca::consensus::build_consensus;
use yasca::datasets::{self, CATALOG};
use yasca::eval::{dense_partition, nmi, EvalError};
use yasca::graph::write_edge_list;
use yasca::local::expand_local_community;
use yasca::pipeline::{
    dataset_name, emit_plot_data, load_graph, load_ground_truth, local_communities, run_pipeline,
    ErrorKind, PipelineError, Stage,
};
use yasca::seeding::select_seeds;

#[derive(Parser)]
#[command(
    name = "yasca",
    version,
    about = "Seed-centric community detection with consensus clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one or more graphs.
    Run(RunArgs),
    /// Grow the local community of a single seed and print its members.
    Local(LocalArgs),
    /// Build the consensus graph and print it as a weighted edge list.
    Consensus(ConsensusArgs),
    /// Score two partition files against each other.
    Nmi(NmiArgs),
    /// List download sources for the benchmark networks, or verify local copies.
    FetchDatasets(FetchArgs),
}

/// Settings shared by every pipeline subcommand. Each flag maps to the
/// config key of the same dotted name and overrides the config file.
#[derive(Args)]
struct Settings {
    /// Flat `key = value` config file applied before any flag.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long = "seed.strategy", value_name = "degree-extremes|random|all")]
    seed_strategy: Option<String>,
    #[arg(long = "seed.p-high", value_name = "FRACTION")]
    seed_p_high: Option<String>,
    #[arg(long = "seed.p-low", value_name = "FRACTION")]
    seed_p_low: Option<String>,
    #[arg(long = "seed.k", value_name = "COUNT")]
    seed_k: Option<String>,
    #[arg(long = "seed.rng-seed", value_name = "U64")]
    seed_rng_seed: Option<String>,
    #[arg(long = "local.metrics", value_name = "r,m,l")]
    local_metrics: Option<String>,
    #[arg(long = "local.accept", value_name = "majority|any|all")]
    local_accept: Option<String>,
    #[arg(long = "local.max-size", value_name = "COUNT")]
    local_max_size: Option<String>,
    #[arg(long = "consensus.tau", value_name = "FRACTION")]
    consensus_tau: Option<String>,
    #[arg(long = "consensus.mode", value_name = "both-clusters|community-only")]
    consensus_mode: Option<String>,
    #[arg(long = "louvain.rng-seed", value_name = "U64")]
    louvain_rng_seed: Option<String>,
    #[arg(long = "louvain.max-passes", value_name = "COUNT")]
    louvain_max_passes: Option<String>,
    #[arg(long = "louvain.min-gain", value_name = "FLOAT")]
    louvain_min_gain: Option<String>,
    #[arg(long, value_name = "COUNT")]
    workers: Option<String>,
    /// Accept self-loops in the input graph.
    #[arg(long)]
    allow_self_loops: bool,
    /// Any other setting, as `key=value`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Settings {
    fn to_config(&self) -> Result<RunConfig, PipelineError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| {
                PipelineError::new(
                    Stage::Config,
                    ErrorKind::Config,
                    format!("cannot read {}: {e}", path.display()),
                )
            })?;
            cfg.apply_text(&text)?;
        }
        let flags = [
            ("seed.strategy", &self.seed_strategy),
            ("seed.p_high", &self.seed_p_high),
            ("seed.p_low", &self.seed_p_low),
            ("seed.k", &self.seed_k),
            ("seed.rng_seed", &self.seed_rng_seed),
            ("local.metrics", &self.local_metrics),
            ("local.accept", &self.local_accept),
            ("local.max_size", &self.local_max_size),
            ("consensus.tau", &self.consensus_tau),
            ("consensus.mode", &self.consensus_mode),
            ("louvain.rng_seed", &self.louvain_rng_seed),
            ("louvain.max_passes", &self.louvain_max_passes),
            ("louvain.min_gain", &self.louvain_min_gain),
            ("run.workers", &self.workers),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.allow_self_loops {
            cfg.allow_self_loops = true;
        }
        for pair in &self.set {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                PipelineError::new(
                    Stage::Config,
                    ErrorKind::Config,
                    format!("--set expects KEY=VALUE, got {pair:?}"),
                )
            })?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    /// Input graph (edge list, or GML by `.gml` extension). Repeatable.
    #[arg(long, value_name = "FILE")]
    graph: Vec<PathBuf>,
    /// Ground-truth partition, `node<TAB>community`. Give one per graph, in the same order.
    #[arg(long, value_name = "FILE")]
    ground_truth: Vec<PathBuf>,
    /// Read the ground truth from this node attribute of a GML graph.
    #[arg(long, value_name = "NAME")]
    truth_attribute: Option<String>,
    /// Output directory. With several graphs each gets `<out>/<dataset>/`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also write `plot.csv` with one row per algorithm and dataset.
    #[arg(long)]
    emit_plot_data: bool,
    /// Also run Louvain directly on the input graph.
    #[arg(long)]
    baseline_louvain: bool,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args)]
struct LocalArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Label of the seed node.
    #[arg(long, value_name = "LABEL")]
    node: String,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args)]
struct ConsensusArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Write the edge list here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args)]
struct NmiArgs {
    /// Partition file, `node<TAB>community`.
    a: PathBuf,
    /// Partition file over the same nodes.
    b: PathBuf,
}

#[derive(Args)]
struct FetchArgs {
    /// Check the downloaded files in this directory instead of listing sources.
    #[arg(long, value_name = "DIR")]
    verify: Option<PathBuf>,
}

fn config_error(message: impl Into<String>) -> PipelineError {
    PipelineError::new(Stage::Config, ErrorKind::Config, message)
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::new(
        Stage::Output,
        ErrorKind::Data,
        format!("cannot write {}: {e}", path.display()),
    )
}

fn cmd_run(args: RunArgs) -> Result<(), PipelineError> {
    let mut base = args.settings.to_config()?;
    let graphs = if args.graph.is_empty() {
        base.graph_path.clone().into_iter().collect()
    } else {
        args.graph.clone()
    };
    if graphs.is_empty() {
        return Err(config_error(
            "no input graph: pass --graph or set run.graph",
        ));
    }
    if args.truth_attribute.is_some() {
        base.truth_attribute = args.truth_attribute.clone();
    }
    run_many(args, base, graphs)
}

fn run_many(args: RunArgs, mut base: RunConfig, graphs: Vec<PathBuf>) -> Result<(), PipelineError> {
    if !args.ground_truth.is_empty() && args.ground_truth.len() != graphs.len() {
        return Err(config_error(format!(
            "{} ground-truth files for {} graphs",
            args.ground_truth.len(),
            graphs.len()
        )));
    }
    if let Some(out) = &args.out {
        base.output_dir = Some(out.clone());
    }
    base.emit_plot_data |= args.emit_plot_data;
    base.baseline_louvain |= args.baseline_louvain;
    let several = graphs.len() > 1;

    let mut results = Vec::new();
    let stdout = io::stdout();
    for (i, graph) in graphs.iter().enumerate() {
        let mut cfg = base.clone();
        cfg.graph_path = Some(graph.clone());
        if let Some(truth) = args.ground_truth.get(i) {
            cfg.ground_truth_path = Some(truth.clone());
        }
        if several {
            cfg.output_dir = base
                .output_dir
                .as_ref()
                .map(|d| d.join(dataset_name(graph)));
            cfg.emit_plot_data = false;
        }
        log::info!("running on {}", graph.display());
        let report = run_pipeline(&cfg)?;
        writeln!(stdout.lock(), "{}", report.result.stable_json())
            .map_err(|e| output_error(Path::new("stdout"), e))?;
        results.push(report.result);
    }
    if several && base.emit_plot_data {
        let dir = base
            .output_dir
            .as_ref()
            .ok_or_else(|| config_error("--emit-plot-data needs --out"))?;
        fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
        emit_plot_data(&results, &dir.join("plot.csv"))?;
    } else if base.emit_plot_data && base.output_dir.is_none() {
        return Err(config_error("--emit-plot-data needs --out"));
    }
    Ok(())
}

fn cmd_local(args: LocalArgs) -> Result<(), PipelineError> {
    let cfg = args.settings.to_config()?;
    let g = load_graph(&args.graph, cfg.allow_self_loops)?;
    let seed = g.index_of(&args.node).ok_or_else(|| {
        PipelineError::new(
            Stage::LocalCommunity,
            ErrorKind::Data,
            format!("node {:?} is not in {}", args.node, args.graph.display()),
        )
    })?;
    let bip = expand_local_community(&g, seed, &cfg.local)
        .map_err(|e| PipelineError::new(Stage::LocalCommunity, ErrorKind::Data, e.to_string()))?;
    let mut out = BufWriter::new(io::stdout().lock());
    for &u in bip.community() {
        writeln!(out, "{}", g.label(u)).map_err(|e| output_error(Path::new("stdout"), e))?;
    }
    out.flush()
        .map_err(|e| output_error(Path::new("stdout"), e))
}

fn cmd_consensus(args: ConsensusArgs) -> Result<(), PipelineError> {
    let cfg = args.settings.to_config()?;
    let g = load_graph(&args.graph, cfg.allow_self_loops)?;
    let seeds = select_seeds(&g, &cfg.seed)
        .map_err(|e| PipelineError::new(Stage::Seeding, ErrorKind::Data, e.to_string()))?;
    let bips = local_communities(&g, &seeds, &cfg.local, cfg.workers)?;
    let consensus = build_consensus(g.labels(), &bips, &cfg.consensus)
        .map_err(|e| PipelineError::new(Stage::Consensus, ErrorKind::Data, e.to_string()))?;
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| output_error(path, e))?;
            let mut w = BufWriter::new(file);
            write_edge_list(&consensus, &mut w)
                .map_err(|e| output_error(path, e))
                .and_then(|_| w.flush().map_err(|e| output_error(path, e)))
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_edge_list(&consensus, &mut w)
                .map_err(|e| output_error(Path::new("stdout"), e))
                .and_then(|_| w.flush().map_err(|e| output_error(Path::new("stdout"), e)))
        }
    }
}

fn cmd_nmi(args: NmiArgs) -> Result<(), PipelineError> {
    let a = load_ground_truth(&args.a)?;
    let b = load_ground_truth(&args.b)?;
    let labels: Vec<String> = a.nodes();
    let eval_err = |e: EvalError| PipelineError::new(Stage::Eval, ErrorKind::Data, e.to_string());
    let pa = dense_partition(&a, &labels).map_err(eval_err)?;
    let pb = dense_partition(&b, &labels).map_err(|e| {
        PipelineError::new(
            Stage::Eval,
            ErrorKind::Data,
            format!(
                "{} does not cover the nodes of {}: {e}",
                args.b.display(),
                args.a.display()
            ),
        )
    })?;
    let score = nmi(&pa, &pb).map_err(eval_err)?;
    println!("{score}");
    Ok(())
}

fn cmd_fetch(args: FetchArgs) -> Result<(), PipelineError> {
    let Some(dir) = args.verify else {
        println!("Download and unzip these files, then run `yasca fetch-datasets --verify DIR`:");
        for d in &CATALOG {
            println!();
            println!("{} ({} nodes, {} edges)", d.name, d.nodes, d.edges);
            println!("  {}", d.description);
            println!("  source:       {}", d.url);
            println!("  file:         {}", d.file_name);
            println!("  ground truth: {}", d.ground_truth);
        }
        return Ok(());
    };
    let mut failures = 0;
    for d in &CATALOG {
        let path = dir.join(d.file_name);
        if !path.exists() {
            println!("{}: missing ({})", d.name, path.display());
            failures += 1;
            continue;
        }
        let g = match fs::File::open(&path)
            .map_err(|e| e.to_string())
            .and_then(|f| {
                yasca::graph::load_gml(BufReader::new(f), Default::default())
                    .map_err(|e| e.to_string())
            }) {
            Ok(g) => g,
            Err(e) => {
                println!("{}: unreadable: {e}", d.name);
                failures += 1;
                continue;
            }
        };
        let problems = datasets::verify(d, &g);
        if problems.is_empty() {
            println!("{}: ok", d.name);
        } else {
            failures += 1;
            println!("{}: {}", d.name, problems.join("; "));
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(PipelineError::new(
            Stage::GraphCore,
            ErrorKind::Data,
            format!("{failures} dataset(s) failed verification"),
        ))
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Config => 1,
        ErrorKind::Data => 2,
        ErrorKind::Internal => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Local(a) => cmd_local(a),
        Command::Consensus(a) => cmd_consensus(a),
        Command::Nmi(a) => cmd_nmi(a),
        Command::FetchDatasets(a) => cmd_fetch(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind))
        }
    }
}
