mod common;

use std::collections::HashSet;
use std::fs;

use yasca::config::RunConfig;
use yasca::eval::LabeledPartition;
use yasca::pipeline::{emit_plot_data, run_pipeline, ErrorKind, Stage};

fn karate() -> RunConfig {
    RunConfig {
        graph_path: Some(common::data_path("karate.txt")),
        ground_truth_path: Some(common::data_path("karate_truth.tsv")),
        ..RunConfig::default()
    }
}

#[test]
fn karate_outputs_cover_every_node_once() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = karate();
    cfg.output_dir = Some(dir.path().to_path_buf());
    cfg.emit_plot_data = true;
    cfg.baseline_louvain = true;
    let report = run_pipeline(&cfg).unwrap();

    let text = fs::read_to_string(dir.path().join("partition.tsv")).unwrap();
    let written = LabeledPartition::read(text.as_bytes()).unwrap();
    assert_eq!(written.len(), 34);
    let nodes: HashSet<String> = written.nodes().into_iter().collect();
    assert_eq!(nodes.len(), 34);
    assert_eq!(written, report.labeled);

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(json["dataset"], "karate");
    assert_eq!(json["node_count"], 34);
    assert_eq!(json["edge_count"], 78);
    assert_eq!(json["seeds_used"].as_array().unwrap().len(), 18);
    assert_eq!(json["config"]["consensus.tau"], "0.5");
    assert!(json["baseline_nmi"].is_number());

    let plot = fs::read_to_string(dir.path().join("plot.csv")).unwrap();
    let lines: Vec<&str> = plot.lines().collect();
    assert_eq!(lines[0], "algorithm,dataset,nmi");
    assert!(lines[1].starts_with("yasca,karate,"));
    assert!(lines[2].starts_with("louvain-baseline,karate,"));
}

#[test]
fn repeated_runs_agree_across_worker_counts() {
    let first = run_pipeline(&karate()).unwrap();
    for workers in [1, 2, 8] {
        let cfg = RunConfig {
            workers,
            ..karate()
        };
        let again = run_pipeline(&cfg).unwrap();
        assert_eq!(again.result.stable_json(), first.result.stable_json());
        assert_eq!(again.partition, first.partition);
    }
}

#[test]
fn missing_graph_is_a_data_error() {
    let cfg = RunConfig {
        graph_path: Some("/nonexistent/graph.txt".into()),
        ..RunConfig::default()
    };
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.stage, Stage::GraphCore);
    assert_eq!(err.kind, ErrorKind::Data);
    assert!(err.to_string().starts_with("graph-core: cannot open"));
}

#[test]
fn missing_graph_setting_is_a_config_error() {
    let err = run_pipeline(&RunConfig::default()).unwrap_err();
    assert_eq!(err.kind, ErrorKind::Config);
}

#[test]
fn truth_with_unknown_nodes_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let truth = dir.path().join("truth.tsv");
    fs::write(&truth, "1\ta\n999\tb\n").unwrap();
    let cfg = RunConfig {
        ground_truth_path: Some(truth),
        ..karate()
    };
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.stage, Stage::Eval);
    assert_eq!(err.kind, ErrorKind::Data);
    assert!(err.message.contains("999"));
}

#[test]
fn plot_data_needs_results() {
    let dir = tempfile::tempdir().unwrap();
    assert!(emit_plot_data(&[], &dir.path().join("plot.csv")).is_err());
}
