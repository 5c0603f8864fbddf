//! End-to-end tests driving the `matroid-menger` binary through its public
//! command surface: JSON in, JSON out, documented exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use matroid_menger_cli::doc;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matroid-menger"))
}

fn flag_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/flag.json")
}

/// A scratch path unique to this process and test, so parallel tests never
/// collide.
fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("matroid-menger-{}-{name}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn json(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

#[test]
fn solve_emits_the_expected_certificate() {
    let flag = flag_path();
    let out = run(&["solve", flag.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let cert = stdout_json(&out);
    assert_eq!(cert["version"], 1);
    assert_eq!(cert["engine"], "solve");
    assert_eq!(
        cert["instance_hash"],
        "sha256:ee8f32f4d32316d5ae6a49eea1159e9243a4ed8588f036d285ead63354f90bb3"
    );
    assert_eq!(json(&cert["paths"]), "[[0,1],[2,4,5]]");
    assert_eq!(json(&cert["cut"]), r#"["a","b","c","t"]"#);
    assert_eq!(json(&cert["cover"]), "[0,2]");

    let transcript = cert["transcript"].as_array().unwrap();
    let clauses: Vec<&str> =
        transcript.iter().map(|e| e["clause"].as_str().unwrap()).collect();
    assert_eq!(
        clauses,
        [
            "paths-valid",
            "edge-disjoint",
            "independence",
            "cut-shape",
            "out-condition",
            "cover-membership",
            "span-condition",
            "count-condition",
        ]
    );
    assert!(transcript.iter().all(|e| e["pass"] == true));
}

#[test]
fn proof_solve_agrees_on_the_path_count() {
    let flag = flag_path();
    let out = run(&["proof-solve", flag.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let cert = stdout_json(&out);
    assert_eq!(cert["engine"], "proof-solve");
    assert_eq!(json(&cert["paths"]), "[[0,1],[2,4,5]]");
    assert_eq!(json(&cert["cut"]), r#"["t"]"#);
    assert_eq!(json(&cert["cover"]), "[1,5]");
}

#[test]
fn solve_then_verify_exits_zero() {
    let flag = flag_path();
    let cert = scratch("roundtrip.json");
    let out = run(&["solve", flag.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let out = run(&["verify", flag.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verified"], true);
    assert!(verdict.get("clause").is_none());
    assert!(verdict.get("message").is_none());
    assert_eq!(verdict["transcript"].as_array().unwrap().len(), 8);
}

#[test]
fn tampered_cover_fails_the_span_clause() {
    let flag = flag_path();
    let good = scratch("tamper-good.json");
    let bad = scratch("tamper-bad.json");
    let out = run(&["solve", flag.to_str().unwrap(), "--out", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let mut cert: Value =
        serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    cert["cover"] = serde_json::json!([0]);
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();

    let out = run(&["verify", flag.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verified"], false);
    assert_eq!(verdict["clause"], "span-condition");
}

#[test]
fn foreign_instance_hash_is_rejected() {
    let flag = flag_path();
    let good = scratch("hash-good.json");
    let bad = scratch("hash-bad.json");
    let out = run(&["solve", flag.to_str().unwrap(), "--out", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let mut cert: Value =
        serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    cert["instance_hash"] = Value::String(format!("sha256:{}", "0".repeat(64)));
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();

    let out = run(&["verify", flag.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verified"], false);
    assert_eq!(verdict["clause"], "instance-hash");
    let message = verdict["message"].as_str().unwrap();
    assert!(message.contains("sha256:ee8f32f4"));
}

#[test]
fn gen_is_byte_stable_and_realizable() {
    let a = scratch("gen-a.json");
    let b = scratch("gen-b.json");
    let args = [
        "gen", "--seed", "7", "--vertices", "5", "--edges", "8", "--matroids",
        "free,uniform,partition",
    ];
    let out = bin().args(args).arg("--out").arg(&a).output().unwrap();
    assert_eq!(code(&out), 0);
    let out = bin().args(args).arg("--out").arg(&b).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let text = std::fs::read_to_string(&a).unwrap();
    let document = doc::parse_instance_document(&text).expect("generated output parses");
    doc::realize_instance(&document).expect("generated output realizes");
}

#[test]
fn generated_instances_solve_and_verify() {
    for seed in ["1", "2", "3", "4", "5"] {
        let instance = scratch(&format!("chain-{seed}.json"));
        let cert = scratch(&format!("chain-{seed}-cert.json"));
        let out = bin()
            .args(["gen", "--seed", seed, "--vertices", "6", "--edges", "10"])
            .args(["--matroids", "free,uniform,partition,gf2,graphic"])
            .arg("--out")
            .arg(&instance)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);

        for engine in ["solve", "proof-solve"] {
            let out = bin()
                .arg(engine)
                .arg(&instance)
                .arg("--out")
                .arg(&cert)
                .output()
                .unwrap();
            assert_eq!(code(&out), 0, "{engine} failed on seed {seed}");
            let out = bin().arg("verify").arg(&instance).arg(&cert).output().unwrap();
            assert_eq!(code(&out), 0, "verify failed on seed {seed}");
        }
    }
}

#[test]
fn malformed_json_is_an_input_error() {
    let path = scratch("malformed.json");
    std::fs::write(&path, "{nope").unwrap();
    let out = bin().arg("solve").arg(&path).output().unwrap();
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_json(&out)["error"]["kind"], "json");
}

#[test]
fn uncovered_in_edge_is_a_schema_error() {
    let path = scratch("uncovered.json");
    std::fs::write(
        &path,
        r#"{
  "version": 1,
  "vertices": ["s", "t"],
  "s": "s",
  "t": "t",
  "edges": [
    { "id": 0, "tail": "s", "head": "t" },
    { "id": 1, "tail": "s", "head": "t" }
  ],
  "matroids": { "t": { "type": "gf2", "columns": { "1": "1" } } }
}
"#,
    )
    .unwrap();
    let out = bin().arg("solve").arg(&path).output().unwrap();
    assert_eq!(code(&out), 2);
    let error = stderr_json(&out);
    assert_eq!(error["error"]["kind"], "schema");
    assert!(error["error"]["message"]
        .as_str()
        .unwrap()
        .contains("uncovered in-edge"));
}

#[test]
fn matroid_loops_are_stripped_with_a_warning() {
    let path = scratch("loops.json");
    std::fs::write(
        &path,
        r#"{
  "version": 1,
  "vertices": ["s", "t"],
  "s": "s",
  "t": "t",
  "edges": [
    { "id": 0, "tail": "s", "head": "t" },
    { "id": 1, "tail": "s", "head": "t" }
  ],
  "matroids": { "t": { "type": "gf2", "columns": { "0": "0", "1": "1" } } }
}
"#,
    )
    .unwrap();
    let out = bin().arg("solve").arg(&path).output().unwrap();
    assert_eq!(code(&out), 0);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("stripped 1 matroid loop edge(s): 0"), "stderr: {stderr}");
    let cert = stdout_json(&out);
    assert_eq!(json(&cert["paths"]), "[[1]]");
}

#[test]
fn empty_edge_list_is_a_valid_unreachable_instance() {
    let instance = scratch("empty.json");
    let cert = scratch("empty-cert.json");
    std::fs::write(
        &instance,
        r#"{ "version": 1, "vertices": ["s", "t"], "s": "s", "t": "t", "edges": [] }
"#,
    )
    .unwrap();
    let out = bin()
        .arg("solve")
        .arg(&instance)
        .arg("--out")
        .arg(&cert)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let document: Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(json(&document["paths"]), "[]");
    assert_eq!(json(&document["cover"]), "[]");

    let out = bin().arg("verify").arg(&instance).arg(&cert).output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn oracle_reports_duality_on_the_flag_instance() {
    let flag = flag_path();
    let out = run(&["oracle", flag.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["max_paths"], 2);
    assert_eq!(report["min_cut_rank"], 2);
    assert_eq!(json(&report["best_system"]), "[[0,1],[2,4,5]]");
    assert_eq!(json(&report["best_cut"]), r#"["t"]"#);
    assert_eq!(report["duality_holds"], true);
}

#[test]
fn axioms_pass_on_the_flag_instance() {
    let flag = flag_path();
    let out = run(&["axioms", flag.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["all_pass"], true);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert!(results.iter().all(|r| r["result"] == "pass"));
}

#[test]
fn guard_env_var_limits_the_oracle() {
    let flag = flag_path();
    let out = bin()
        .args(["oracle", flag.to_str().unwrap()])
        .env("MATROID_MENGER_GUARDS", "vertices=3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert_eq!(stderr_json(&out)["error"]["kind"], "guard");
}

#[test]
fn unlimited_guards_are_accepted() {
    let flag = flag_path();
    let out = bin()
        .args(["oracle", flag.to_str().unwrap()])
        .env("MATROID_MENGER_GUARDS", "unlimited")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn unknown_guard_keys_are_rejected() {
    let flag = flag_path();
    let out = bin()
        .args(["oracle", flag.to_str().unwrap()])
        .env("MATROID_MENGER_GUARDS", "gigawatts=3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_json(&out)["error"]["kind"], "schema");
}
