use std::path::Path;
use std::process::{Command, Output};

const GRAPH: &str = r#"{
    "variables": [
        {"name": "R1", "range": ["true", "false"]},
        {"name": "R2", "range": ["true", "false"]},
        {"name": "R3", "range": ["true", "false"]}
    ],
    "factors": [
        {"name": "phi", "args": ["R1", "R2", "R3"], "table": ["1", "2", "2", "3", "4", "5", "5", "6"]},
        {"name": "psi", "args": ["R1", "R2"], "table": ["1", "2", "3", "4"]}
    ]
}"#;

fn decor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decor")).args(args).output().unwrap()
}

fn write_graph(dir: &Path) -> String {
    let path = dir.join("graph.json");
    std::fs::write(&path, GRAPH).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn detect_prints_subsets_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path());
    let json = stdout_json(&decor(&["detect", "--input", &graph, "--factor", "phi", "--verify"]));
    assert_eq!(json["subsets"], serde_json::json!([["R2", "R3"]]));
    assert_eq!(json["verified"], serde_json::json!(true));
    assert_eq!(json["algorithm"], "decor");

    let json = stdout_json(&decor(&[
        "detect",
        "--input",
        &graph,
        "--factor",
        "phi",
        "--algorithm",
        "naive",
    ]));
    assert_eq!(json["subsets"], serde_json::json!([["R2", "R3"]]));

    let json = stdout_json(&decor(&["detect", "--input", &graph, "--factor", "psi"]));
    assert_eq!(json["subsets"], serde_json::json!([]));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path());
    let out = decor(&["detect", "--input", &graph, "--factor", "missing"]);
    assert_eq!(out.status.code(), Some(2));
    let out = decor(&["detect", "--input", "/nonexistent/graph.json", "--factor", "phi"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"variables\": [}").unwrap();
    let out = decor(&["lift", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = decor(&["bench", "--n", "4", "--k", "1"]);
    assert!(out.status.success(), "k = 1 is skipped, not an error");
    let out = decor(&["bench", "--n", "4", "--k", "third"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn detect_timeout_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = decor::bench::generate_factor(12, 0, 2, 1).unwrap();
    let graph = decor::FactorGraph::new(f.args().to_vec(), vec![f]).unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(&path, graph.to_json_string().unwrap()).unwrap();
    let out = decor(&[
        "detect",
        "--input",
        path.to_str().unwrap(),
        "--factor",
        "gen_n12_k0",
        "--algorithm",
        "naive",
        "--timeout-ms",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lift_writes_grouping() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("chain.json");
    std::fs::write(
        &graph,
        r#"{"variables": [
            {"name": "A", "range": ["true", "false"]},
            {"name": "B", "range": ["true", "false"]},
            {"name": "C", "range": ["true", "false"]}],
           "factors": [
            {"name": "phi1", "args": ["A", "B"], "table": ["1", "2", "3", "4"]},
            {"name": "phi2", "args": ["C", "B"], "table": ["1", "2", "3", "4"]}]}"#,
    )
    .unwrap();
    let out_path = dir.path().join("groups.json");
    let out = decor(&[
        "lift",
        "--input",
        graph.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let groups: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(
        groups,
        serde_json::json!({"variable_groups": [["A", "C"], ["B"]], "factor_groups": [["phi1", "phi2"]]})
    );
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("results.csv");
    let out = decor(&[
        "bench",
        "--n",
        "2,4",
        "--k",
        "0,2,half,n-1,n",
        "--reps",
        "2",
        "--timeout-ms",
        "10000",
        "--seed",
        "7",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("algorithm,n,k,range,seed,rep,status,elapsed_us,result_size")
    );
    // cells: n=2 -> {0, 2}; n=4 -> {0, 2, 3, 4}
    assert_eq!(lines.count(), 2 * 6 * 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("median_us"));
}
