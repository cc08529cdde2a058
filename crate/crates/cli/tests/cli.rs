use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn itrans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itrans"))
        .args(args)
        .env_remove("TOOL_SEED")
        .output()
        .expect("spawn itrans")
}

fn itrans_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_itrans"))
        .args(args)
        .env_remove("TOOL_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn itrans");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn g1_text() -> String {
    let out = itrans(&["construct", "g1", "--r", "4", "--n", "3"]);
    assert_eq!(code(&out), 0);
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn construct_g1_is_deterministic_and_matches_layout() {
    let a = g1_text();
    assert_eq!(a, g1_text());
    let doc: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["r"], 4);
    assert_eq!(
        doc["parts"],
        serde_json::json!([[0, 1, 6], [2, 3, 7], [4, 10, 11], [5, 8, 9]])
    );
    assert_eq!(doc["edges"].as_array().unwrap().len(), 12);
    assert!(a.ends_with('\n'));
}

#[test]
fn construct_writes_files_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let meta = dir.path().join("m.json");
    let res = itrans(&[
        "construct",
        "g2",
        "--r",
        "4",
        "--n",
        "6",
        "--t",
        "1",
        "--h",
        "cycle:5",
        "--out",
        out.to_str().unwrap(),
        "--meta",
        meta.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert!(res.stdout.is_empty());
    let meta: Value = serde_json::from_str(&fs::read_to_string(meta).unwrap()).unwrap();
    assert_eq!(meta["block_sizes"], serde_json::json!([5, 2, 5]));
    assert_eq!(meta["predicted_max_degree"], 3);
    assert_eq!(meta["h"], "cycle:5");
    let g: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(g["parts"].as_array().unwrap().len(), 4);
}

#[test]
fn seed_comes_from_flag_or_env() {
    let args = ["construct", "g2", "--r", "4", "--n", "21", "--t", "1"];
    let a = itrans(&[&args[..], &["--seed", "9"]].concat());
    let b = Command::new(env!("CARGO_BIN_EXE_itrans"))
        .args(args)
        .env("TOOL_SEED", "9")
        .output()
        .unwrap();
    let c = itrans(&[&args[..], &["--seed", "10"]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn infeasible_construction_exits_3() {
    assert_eq!(code(&itrans(&["construct", "g1", "--r", "4", "--n", "4"])), 3);
    assert_eq!(code(&itrans(&["construct", "g1", "--r", "5", "--n", "4"])), 3);
    assert_eq!(
        code(&itrans(&["verify", "--preset", "prop22", "--r", "6", "--n", "10"])),
        3
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&itrans(&["count", "--in", "missing.json"])), 2);
    assert_eq!(code(&itrans(&[])), 2);
    assert_eq!(code(&itrans(&["construct", "g1", "--r", "0", "--n", "3"])), 2);
    assert_eq!(code(&itrans(&["frobnicate"])), 2);
    assert_eq!(code(&itrans_stdin(&["count"], "{\"r\": 2}")), 2);
}

#[test]
fn verify_g1_preset() {
    let out = itrans(&["verify", "--preset", "g1", "--r", "4", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let rep = json(&out);
    assert_eq!(rep["computed"]["it_count"], 0);
    assert!(rep["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["status"] == "pass"));

    let table = itrans(&["verify", "--preset", "g1", "--r", "4", "--n", "3", "--format", "table"]);
    assert_eq!(code(&table), 0);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("PASS"));
}

#[test]
fn verify_prop24_reports_unmet_hypothesis() {
    let out = itrans(&[
        "verify",
        "--preset",
        "prop24",
        "--r",
        "4",
        "--n",
        "6",
        "--h",
        "regular:5,5,0",
    ]);
    assert_eq!(code(&out), 0);
    let rep = json(&out);
    let d = rep["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["id"] == "d")
        .unwrap();
    assert_eq!(d["status"], "not_applicable");
}

#[test]
fn count_reads_stdin_and_is_worker_independent() {
    let out = itrans_stdin(&["count"], &g1_text());
    assert_eq!(code(&out), 0);
    let res = json(&out);
    assert_eq!(res["exists"], false);
    assert_eq!(res["count"], 0);

    let g2 = itrans(&["construct", "g2", "--r", "4", "--n", "21", "--seed", "3"]).stdout;
    let g2 = String::from_utf8(g2).unwrap();
    let one = json(&itrans_stdin(&["count", "--workers", "1"], &g2));
    let four = json(&itrans_stdin(&["count", "--workers", "4"], &g2));
    assert_eq!(one, four);
    assert!(one["count"].as_u64().unwrap() > 0);
}

#[test]
fn count_flags_empty_part() {
    let g = "{\"r\":2,\"parts\":[[0],[]],\"edges\":[]}";
    let res = json(&itrans_stdin(&["count"], g));
    assert_eq!(res["count"], 0);
    assert_eq!(res["empty_part"], 1);
}

#[test]
fn find_subcommands() {
    let k22_minus = "{\"r\":2,\"parts\":[[0,1],[2,3]],\"edges\":[[0,2],[0,3],[1,2]]}";
    let res = json(&itrans_stdin(&["find", "it"], k22_minus));
    assert_eq!(res["exists"], true);
    assert_eq!(res["witness"]["picks"], serde_json::json!([1, 3]));

    let res = json(&itrans_stdin(&["find", "blowup", "--s", "2"], k22_minus));
    assert_eq!(res["exists"], false);

    let c4 = "{\"r\":2,\"parts\":[[0,1],[2,3]],\"edges\":[[0,2],[0,3],[1,2],[1,3]]}";
    let res = json(&itrans_stdin(&["find", "kss", "--s", "2"], c4));
    assert_eq!(res["exists"], true);

    let res = json(&itrans_stdin(&["find", "krrs", "--s", "1"], k22_minus));
    assert_eq!(res["status"], "found");
}

#[test]
fn imc_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", &g1_text());
    let good = write(dir.path(), "good.json", "{\"pairs\": [[0, 2], [4, 6], [8, 10]]}");
    let bad = write(dir.path(), "bad.json", "{\"pairs\": [[0, 2], [1, 3], [8, 10]]}");

    let out = itrans(&["imc", "verify", "--in", &g, "--pairs", &good]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], true);

    let out = itrans(&["imc", "verify", "--in", &g, "--pairs", &bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["valid"], false);

    for q in 0..4 {
        let q = q.to_string();
        let out = itrans(&["imc", "pit", "--in", &g, "--pairs", &good, "--q", &q]);
        assert_eq!(code(&out), 0);
        let pit = json(&out);
        assert_eq!(pit["picks"].as_array().unwrap().len(), 3);
    }
    assert_eq!(
        code(&itrans(&["imc", "pit", "--in", &g, "--pairs", &good, "--q", "4"])),
        2
    );

    let out = itrans(&["imc", "attach", "--in", &g, "--pairs", &good]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["0"], serde_json::json!([2, 3]));

    let out = itrans(&["imc", "find", "--in", &g, "--u", "0", "--v", "2"]);
    assert_eq!(json(&out)["exists"], true);
    assert_eq!(code(&itrans(&["imc", "find", "--in", &g, "--u", "0", "--v", "1"])), 2);

    let out = itrans(&["imc", "decompose", "--in", &g]);
    let d = json(&out);
    assert_eq!(d["decomposable"], true);
    assert_eq!(d["pairs"]["pairs"][0], serde_json::json!([[0, 1], [2, 3]]));
}

#[test]
fn criticalize_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    // G1(4,3) plus an edge between different blocks
    let mut doc: Value = serde_json::from_str(&g1_text()).unwrap();
    doc["edges"].as_array_mut().unwrap().push(serde_json::json!([0, 5]));
    let g = write(dir.path(), "g.json", &doc.to_string());
    let out_path = dir.path().join("crit.json");
    let rep_path = dir.path().join("rep.json");
    let out = itrans(&[
        "criticalize",
        "--in",
        &g,
        "--out",
        out_path.to_str().unwrap(),
        "--report",
        rep_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep: Value = serde_json::from_str(&fs::read_to_string(&rep_path).unwrap()).unwrap();
    assert_eq!(rep["is_critical"], true);
    assert_eq!(rep["removed_edges"], serde_json::json!([[0, 5]]));
    assert_eq!(fs::read_to_string(&out_path).unwrap(), g1_text());

    let with_it = "{\"r\":2,\"parts\":[[0],[1]],\"edges\":[]}";
    assert_eq!(code(&itrans_stdin(&["criticalize"], with_it)), 2);
}

#[test]
fn help_lists_flags() {
    let out = itrans(&["verify", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in [
        "--preset",
        "--r",
        "--n",
        "--t",
        "--s",
        "--seed",
        "--format",
        "--workers",
    ] {
        assert!(text.contains(flag), "missing {flag}");
    }
}
