use std::fs;
use std::path::Path;

use degnn::cli::{run, EXIT_INPUT, EXIT_NUMERIC, EXIT_OK};

const SAMPLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_graph.txt");

fn degnn(args: &[&str]) -> i32 {
    run(std::iter::once("degnn").chain(args.iter().copied()))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn partition_and_decompose_write_their_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(degnn(&["partition", "--edges", SAMPLE, "--p", "4", "--out", out]), EXIT_OK);
    let labels: Vec<usize> = read(tmp.path(), "partition.txt").lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(labels.len(), 200);
    assert!(labels.iter().all(|&p| p < 4));
    assert!(read(tmp.path(), "manifest.txt").contains("input.sha256."));

    assert_eq!(degnn(&["decompose", "--edges", SAMPLE, "--k", "3", "--p", "4", "--out", out]), EXIT_OK);
    let d = degnn::decompose::read_decomposition_dir(tmp.path()).unwrap();
    assert_eq!(d.k(), 3);
    let g = degnn::graph_core::load_edge_list(SAMPLE, degnn::graph_core::Indexing::Zero).unwrap();
    assert!(degnn::decompose::validate(&g, &d).is_ok());
}

#[test]
fn decay_and_verify_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(degnn(&["decay", "--depths", "1..4", "--out", out]), EXIT_OK);
    let csv = read(tmp.path(), "decay.csv");
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with(&degnn::propagate::CURVE_HEADER.join(",")));
    assert!(read(tmp.path(), "regime.txt").contains("regime=decay"));

    assert_eq!(degnn(&["verify", "--which", "kron", "--trials", "20", "--out", out]), EXIT_OK);
    assert!(read(tmp.path(), "verify_kron.txt").contains("20/20 pass"));
}

#[test]
fn train_writes_history_and_result() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let args = ["train", "--nodes", "80", "--epochs", "30", "--decompose", "ca", "--p", "4", "--k-schedule", "2,2", "--out", out];
    assert_eq!(degnn(&args), EXIT_OK);
    assert_eq!(read(tmp.path(), "history.csv").lines().count(), 31);
    assert!(read(tmp.path(), "result.txt").contains("test_acc="));
}

#[test]
fn bad_input_and_divergence_map_to_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(degnn(&["partition", "--edges", "/nonexistent", "--p", "2", "--out", out]), EXIT_INPUT);
    assert_eq!(degnn(&["decompose", "--edges", SAMPLE, "--k", "0", "--out", out]), EXIT_INPUT);
    assert_eq!(degnn(&["verify", "--which", "nope", "--out", out]), EXIT_INPUT);
    assert_eq!(degnn(&["train", "--decompose", "none", "--k-schedule", "2,2", "--out", out]), EXIT_INPUT);
    assert_eq!(degnn(&["frobnicate"]), EXIT_INPUT);
    assert_eq!(degnn(&["train", "--nodes", "80", "--lr", "1e6", "--patience", "300", "--out", out]), EXIT_NUMERIC);
    assert_eq!(degnn(&["--help"]), EXIT_OK);
}
