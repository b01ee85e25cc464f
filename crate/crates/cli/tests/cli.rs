//! End-to-end runs of the `ruliad` binary.

use std::path::Path;
use std::process::{Command, Output};

fn ruliad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruliad")).args(args).output().expect("binary runs")
}

fn ruliad_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruliad"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn growth_csv_ends_at_25216() {
    let out = ruliad(&["growth", "--s", "2", "--k", "2", "--t", "10", "--mode", "directed"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let last = body.lines().last().unwrap();
    assert_eq!(last, "10,25216");
    assert!(body.starts_with("# ruliad/v1\nt,count\n"));
}

#[test]
fn group_relations_three_pass_lines() {
    let out = ruliad(&["group", "--n", "3", "--check", "relations"]);
    assert!(out.status.success());
    let body = stdout(&out);
    let passes: Vec<&str> = body.lines().filter(|l| l.starts_with("PASS")).collect();
    assert_eq!(passes.len(), 3, "{body}");
}

#[test]
fn build_t1_json_has_9_nodes_8_edges() {
    let out = ruliad(&["build", "--s", "2", "--k", "2", "--t", "1", "--format", "json"]);
    assert!(out.status.success());
    let graph = ruliad_core::export::from_json(&stdout(&out)).unwrap();
    assert_eq!(graph.nodes.len(), 9);
    assert_eq!(graph.edges.len(), 8);
}

#[test]
fn node_cap_violation_uses_distinct_exit_code() {
    let out = ruliad(&["build", "--s", "2", "--k", "2", "--t", "6", "--node-cap", "50"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_error_is_exit_2() {
    let out = ruliad(&["growth", "--mode", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn finite_tape_requires_n() {
    let out = ruliad(&["build", "--tape", "cyclic", "--t", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
}

#[test]
fn cache_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "build", "--s", "1", "--k", "2", "--t", "3", "--format", "json", "--cache-dir",
    ];
    let cache_str = cache.to_str().unwrap();
    let first = ruliad(&[&args[..], &[cache_str]].concat());
    assert!(first.status.success());
    // second run must hit the cache and reproduce the bytes
    let second = ruliad(&[&args[..], &[cache_str]].concat());
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);

    // corrupt the cache entry: treated as a miss with a warning
    let entry = files[0].as_ref().unwrap().path();
    std::fs::write(&entry, "{not json").unwrap();
    let third = ruliad(&[&args[..], &[cache_str]].concat());
    assert!(third.status.success());
    assert_eq!(first.stdout, third.stdout);
    assert!(String::from_utf8_lossy(&third.stderr).contains("corrupt cache"));

    // a different t is a different key
    let other = ruliad(&[
        "build", "--s", "1", "--k", "2", "--t", "2", "--format", "json", "--cache-dir",
        cache_str,
    ]);
    assert!(other.status.success());
    assert_ne!(first.stdout, other.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
}

#[test]
fn cache_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ruliad"))
        .env("RULIAD_CACHE_DIR", dir.path())
        .args(["build", "--s", "1", "--k", "1", "--t", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn dot_and_graphml_outputs_are_versioned() {
    let dot = ruliad(&["build", "--s", "1", "--k", "1", "--t", "1", "--format", "dot"]);
    assert!(stdout(&dot).starts_with("// ruliad/v1\n"));
    let xml = ruliad(&["build", "--s", "1", "--k", "1", "--t", "1", "--format", "graphml"]);
    assert!(stdout(&xml).contains("<desc>ruliad/v1</desc>"));
}

#[test]
fn determinism_flag_compares_worker_counts() {
    let out = ruliad(&[
        "build",
        "--s",
        "2",
        "--k",
        "2",
        "--t",
        "4",
        "--threads",
        "4",
        "--check-determinism",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("determinism check passed"));
}

#[test]
fn ca_counts_subcommand() {
    let out = ruliad(&["ca", "--rules", "even", "--t", "5"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.starts_with("# ruliad/v1\nt,new_configs\n0,1\n"));
}

#[test]
fn det_profile_csv_matches_table_head() {
    let out = ruliad(&["det", "--t", "3"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.contains("0,1,1\n1,9,8\n2,36,27\n3,68,32\n"), "{body}");
}

#[test]
fn causal_det_graph_exports() {
    let out = ruliad(&["causal", "--rule", "1953", "--t", "5", "--format", "dot"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("digraph"));
}

#[test]
fn group_exports_table_and_cayley() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    let out = ruliad(&["group", "--n", "3", "--table", "--out", table.to_str().unwrap()]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&table).unwrap();
    assert_eq!(body.lines().count(), 25); // header + 24 rows
    let first = body.lines().nth(1).unwrap();
    assert!(first.starts_with("0,1,2,3,4,5,6,7,")); // identity row

    let out = ruliad(&["group", "--n", "2", "--cayley", "standard", "--format", "json"]);
    let graph = ruliad_core::export::from_json(&stdout(&out)).unwrap();
    assert_eq!(graph.nodes.len(), 8);
    assert_eq!(graph.edges.len(), 32);
}

#[test]
fn verify_passes_end_to_end() {
    let out = ruliad_in(std::env::temp_dir().as_path(), &["verify"]);
    let body = stdout(&out);
    assert!(out.status.success(), "{body}");
    assert!(!body.contains("FAIL"), "{body}");
    assert!(body.contains("all 32 checks passed"), "{body}");
}
