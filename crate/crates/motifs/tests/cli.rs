//! End-to-end checks of the `motifs` binary: output formats, determinism,
//! and exit codes (0 success, 2 usage, 3 data, 4 numeric).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use motifs::graph::{parse_edge_list, GraphKind};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_motifs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("motifs-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn catalog_sizes_via_cli() {
    for (k, kind, expect) in [
        ("3", "undirected", 2),
        ("4", "undirected", 6),
        ("5", "undirected", 21),
        ("3", "directed", 13),
        ("3", "signed", 7),
    ] {
        let out = run(&["catalog", "--k", k, "--kind", kind]);
        let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(
            parsed["classes"].as_array().unwrap().len(),
            expect,
            "k={k} {kind}"
        );
    }
}

#[test]
fn sample_at_p_one_reproduces_input_modulo_order() {
    let input = write_temp("p1.txt", "4 0\n0 1\n1 2\n2 0\n");
    let out_path = input.with_file_name("p1.sampled.txt");
    let out = run(&[
        "sample",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--p",
        "1.0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let original = parse_edge_list(
        &std::fs::read_to_string(&input).unwrap(),
        GraphKind::Undirected,
    )
    .unwrap();
    let sampled = parse_edge_list(
        &std::fs::read_to_string(&out_path).unwrap(),
        GraphKind::Undirected,
    )
    .unwrap();
    assert_eq!(original, sampled);

    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(&format!("{}.json", out_path.display()))).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["effective_p"], 1.0);
    assert_eq!(sidecar["kept_edges"], 4);
}

#[test]
fn hash_sampling_is_byte_identical_across_runs() {
    let mut text = String::new();
    for i in 0..200u32 {
        let j = (i * 7 + 1) % 211;
        if j != i {
            text.push_str(&format!("{i} {j} >\n"));
        }
    }
    let input = write_temp("hash.txt", &text);
    let out_a = input.with_file_name("hash.a.txt");
    let out_b = input.with_file_name("hash.b.txt");
    for out_path in [&out_a, &out_b] {
        let out = run(&[
            "sample",
            "--input",
            input.to_str().unwrap(),
            "--kind",
            "directed",
            "--p",
            "0.4",
            "--mode",
            "hash",
            "--hash-params",
            "13,5,44531,64,211",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
}

#[test]
fn enumerate_agrees_with_brute_force_flag() {
    let input = write_temp("enum.txt", "0 1\n1 2\n2 0\n2 3\n3 4\n4 2\n1 4\n");
    let fast = stdout_of(&run(&[
        "enumerate",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "4",
    ]));
    let slow = stdout_of(&run(&[
        "enumerate",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "4",
        "--brute-force",
    ]));
    assert_eq!(fast, slow);
}

#[test]
fn infer_on_triangle_at_p_one() {
    let input = write_temp("k3.txt", "0 1\n1 2\n2 0\n");
    let out = run(&[
        "infer",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
        "--p",
        "1.0",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["omega_hat"][0], 0.0);
    assert_eq!(parsed["omega_hat"][1], 1.0);
    assert_eq!(parsed["W"], 1.0);
}

#[test]
fn infer_wedge_after_half_sampling() {
    // a lone path: m = (1, 0) at p = 0.5 implies omega_hat = (1, 0)
    let input = write_temp("path3.txt", "0 1\n1 2\n");
    let out = run(&[
        "infer",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
        "--p",
        "0.5",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["omega_hat"][0], 1.0);
    assert_eq!(parsed["omega_hat"][1], 0.0);
    assert_eq!(parsed["n_hat"][0], 4.0);
}

#[test]
fn missing_p_is_a_usage_error() {
    let input = write_temp("usage.txt", "0 1\n");
    let out = run(&[
        "infer",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_is_a_data_error() {
    let input = write_temp("bad.txt", "0 1\nbogus line\n");
    let out = run(&[
        "enumerate",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn empty_sample_is_a_numeric_error() {
    // two isolated edges: no 3-node subgraph at all
    let input = write_temp("empty.txt", "0 1\n2 3\n");
    let out = run(&[
        "infer",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
        "--p",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn eval_reports_zero_error_at_p_one() {
    let input = write_temp("eval.txt", "0 1\n1 2\n2 0\n2 3\n3 4\n");
    let out = run(&[
        "eval",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
        "--p",
        "1.0",
        "--runs",
        "5",
        "--seed",
        "9",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    for row in parsed["blocks"][0]["rows"].as_array().unwrap() {
        assert_eq!(row["mse"], 0.0);
    }
}

#[test]
fn catalog_emits_transition_matrices_on_request() {
    let out = run(&["catalog", "--k", "3", "--kind", "undirected", "--p", "0.5"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["transition"][0][1], 0.375);
    assert_eq!(parsed["inverse"][0][1], -12.0);
    assert_eq!(parsed["inverse"][1][1], 8.0);
}

#[test]
fn bound_tsv_has_one_row_per_class() {
    let input = write_temp("bound.txt", "0 1\n1 2\n2 0\n2 3\n");
    let out = run(&[
        "bound",
        "--input",
        input.to_str().unwrap(),
        "--kind",
        "undirected",
        "--k",
        "3",
        "--p",
        "0.5",
        "--format",
        "tsv",
    ]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 3); // header + 2 classes
}
