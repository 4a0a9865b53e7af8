//! CLI contract: the documented exit-code matrix exercised end-to-end.
//!
//! Exit codes: 0 success, 2 input/validation, 3 convergence,
//! 4 verification. All randomness flows from --seed; reruns with identical
//! flags produce byte-identical outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cosyn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cosyn"))
}

fn run(args: &[&str]) -> Output {
    cosyn().args(args).output().expect("spawn cosyn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cosyn-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn criterion_8_cli_contract() {
    let dir = tmpdir("contract");
    let mat = dir.join("qft2.json");
    let seq = dir.join("qft2.seq.json");

    // gen → synth → verify → expand → info, all succeeding.
    let out = run(&["gen", "qft", "--qubits", "2", "-o", path_str(&mat)]);
    assert_eq!(code(&out), 0, "gen: {out:?}");

    let out = run(&["synth", path_str(&mat), "-o", path_str(&seq)]);
    assert_eq!(code(&out), 0, "synth: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("distance"),
        "synth must print the distance: {stdout}"
    );

    let out = run(&["verify", path_str(&mat), path_str(&seq)]);
    assert_eq!(code(&out), 0, "verify: {out:?}");

    let out = run(&["expand", path_str(&mat)]);
    assert_eq!(code(&out), 0, "expand: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.lines().count() >= 1,
        "expand prints one line per word"
    );

    let out = run(&["info", path_str(&seq)]);
    assert_eq!(code(&out), 0, "info: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("max weight: 2"), "info output: {stdout}");

    println!("criterion 8 PASS: CLI contract (gen → synth → verify → expand → info)");
}

#[test]
fn gen_validation_failures_exit_2() {
    let dir = tmpdir("gen-fail");
    let out = run(&[
        "gen",
        "qft",
        "--qubits",
        "0",
        "-o",
        path_str(&dir.join("x.json")),
    ]);
    assert_eq!(code(&out), 2);
    // Unknown gate names are rejected by argument parsing, also exit 2.
    let out = run(&["gen", "frobnicate", "-o", path_str(&dir.join("x.json"))]);
    assert_eq!(code(&out), 2);
    // Fixed-arity gates reject a mismatched qubit count.
    let out = run(&[
        "gen",
        "cnot",
        "--qubits",
        "3",
        "-o",
        path_str(&dir.join("x.json")),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tmpdir("gen-det");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "random",
            "--qubits",
            "3",
            "--seed",
            "7",
            "-o",
            path_str(&a)
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "gen",
            "random",
            "--qubits",
            "3",
            "--seed",
            "7",
            "-o",
            path_str(&b)
        ])),
        0
    );
    assert_eq!(
        fs::read(&a).unwrap(),
        fs::read(&b).unwrap(),
        "byte-identical reruns"
    );
    let c = dir.join("c.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "random",
            "--qubits",
            "3",
            "--seed",
            "8",
            "-o",
            path_str(&c)
        ])),
        0
    );
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn synth_rerun_is_byte_identical() {
    let dir = tmpdir("synth-det");
    let mat = dir.join("u.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "random",
            "--qubits",
            "2",
            "--seed",
            "5",
            "-o",
            path_str(&mat)
        ])),
        0
    );
    let s1 = dir.join("s1.json");
    let s2 = dir.join("s2.json");
    assert_eq!(
        code(&run(&["synth", path_str(&mat), "-o", path_str(&s1)])),
        0
    );
    assert_eq!(
        code(&run(&["synth", path_str(&mat), "-o", path_str(&s2)])),
        0
    );
    assert_eq!(
        fs::read(&s1).unwrap(),
        fs::read(&s2).unwrap(),
        "byte-identical synth output"
    );
}

#[test]
fn synth_rejects_non_unitary_exit_2() {
    let dir = tmpdir("synth-nonu");
    let bad = dir.join("bad.json");
    // Valid matrix JSON, but 2·identity is not unitary.
    fs::write(&bad, r#"{"dim":2,"data":[[[2,0],[0,0]],[[0,0],[2,0]]]}"#).unwrap();
    let out = run(&[
        "synth",
        path_str(&bad),
        "-o",
        path_str(&dir.join("out.json")),
    ]);
    assert_eq!(code(&out), 2, "{out:?}");
}

#[test]
fn synth_parse_error_exit_2() {
    let dir = tmpdir("synth-parse");
    let bad = dir.join("bad.json");
    fs::write(&bad, "not json").unwrap();
    let out = run(&[
        "synth",
        path_str(&bad),
        "-o",
        path_str(&dir.join("out.json")),
    ]);
    assert_eq!(code(&out), 2);
    // Missing file is also an input failure.
    let out = run(&[
        "synth",
        path_str(&dir.join("absent.json")),
        "-o",
        path_str(&dir.join("out.json")),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn synth_starved_iterations_exit_3_with_history() {
    let dir = tmpdir("synth-starve");
    let mat = dir.join("u.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "random",
            "--qubits",
            "2",
            "--seed",
            "11",
            "-o",
            path_str(&mat)
        ])),
        0
    );
    let out = run(&[
        "synth",
        path_str(&mat),
        "-o",
        path_str(&dir.join("out.json")),
        "--max-iter",
        "1",
    ]);
    assert_eq!(code(&out), 3, "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("residual history"),
        "must print residuals: {stderr}"
    );
}

#[test]
fn verify_failures() {
    let dir = tmpdir("verify");
    let mat = dir.join("u.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "random",
            "--qubits",
            "2",
            "--seed",
            "3",
            "-o",
            path_str(&mat)
        ])),
        0
    );

    // Empty sequence against a non-identity matrix: verification failure.
    let empty = dir.join("empty.seq.json");
    fs::write(
        &empty,
        r#"{"n_qubits":2,"factors":[],"order":"left-to-right"}"#,
    )
    .unwrap();
    let out = run(&["verify", path_str(&mat), path_str(&empty)]);
    assert_eq!(code(&out), 4, "{out:?}");

    // Dimension mismatch: input failure.
    let empty3 = dir.join("empty3.seq.json");
    fs::write(
        &empty3,
        r#"{"n_qubits":3,"factors":[],"order":"left-to-right"}"#,
    )
    .unwrap();
    let out = run(&["verify", path_str(&mat), path_str(&empty3)]);
    assert_eq!(code(&out), 2, "{out:?}");

    // Identity matrix against the empty sequence passes.
    let id = dir.join("id.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "identity",
            "--qubits",
            "2",
            "-o",
            path_str(&id)
        ])),
        0
    );
    let out = run(&["verify", path_str(&id), path_str(&empty)]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn verify_json_report_schema() {
    let dir = tmpdir("verify-json");
    let mat = dir.join("u.json");
    let seq = dir.join("u.seq.json");
    assert_eq!(
        code(&run(&["gen", "qft", "--qubits", "2", "-o", path_str(&mat)])),
        0
    );
    assert_eq!(
        code(&run(&[
            "synth",
            path_str(&mat),
            "-o",
            path_str(&seq),
            "--json"
        ])),
        0
    );
    let out = run(&["verify", path_str(&mat), path_str(&seq), "--json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report must be valid JSON");
    for key in ["distance", "pass", "iterations", "factors", "max_weight"] {
        assert!(report.get(key).is_some(), "missing report key {key}");
    }
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
}

#[test]
fn expand_prints_generator_coefficients() {
    let dir = tmpdir("expand");
    // exp(iπ/4·ZZ) as matrix JSON: diag(e^{iπ/4}, e^{−iπ/4}, e^{−iπ/4}, e^{iπ/4}).
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let mat = dir.join("zz.json");
    fs::write(
        &mat,
        format!(
            r#"{{"dim":4,"data":[[[{c},{c}],[0,0],[0,0],[0,0]],[[0,0],[{c},-{c}],[0,0],[0,0]],[[0,0],[0,0],[{c},-{c}],[0,0]],[[0,0],[0,0],[0,0],[{c},{c}]]]}}"#
        ),
    )
    .unwrap();
    let out = run(&["expand", path_str(&mat)]);
    assert_eq!(code(&out), 0, "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.trim(), "ZZ 0.7853981634", "expand output: {stdout}");

    // Identity expands to nothing.
    let id = dir.join("id.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "identity",
            "--qubits",
            "2",
            "-o",
            path_str(&id)
        ])),
        0
    );
    let out = run(&["expand", path_str(&id)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "identity must print no lines");

    // Non-unitary input is rejected.
    let bad = dir.join("bad.json");
    fs::write(&bad, r#"{"dim":1,"data":[[[2,0]]]}"#).unwrap();
    assert_eq!(code(&run(&["expand", path_str(&bad)])), 2);
}

#[test]
fn info_reports_and_warns() {
    let dir = tmpdir("info");
    // Hand-written weight-3 sequence: inspection passes through with a warning.
    let seq = dir.join("w3.seq.json");
    fs::write(
        &seq,
        r#"{"n_qubits":3,"factors":[{"kind":"pauli_exp","word":"ZZZ","angle":0.25}],"order":"left-to-right"}"#,
    )
    .unwrap();
    let out = run(&["info", path_str(&seq)]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("3:1"),
        "histogram must show weight 3: {stdout}"
    );
    assert!(
        stdout.contains("warning"),
        "must warn above native weight: {stdout}"
    );

    // Empty sequence: zero counts.
    let empty = dir.join("empty.seq.json");
    fs::write(
        &empty,
        r#"{"n_qubits":1,"factors":[],"order":"left-to-right"}"#,
    )
    .unwrap();
    let out = run(&["info", path_str(&empty)]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("factors: 0"));

    // Parse failure.
    let bad = dir.join("bad.seq.json");
    fs::write(
        &bad,
        r#"{"n_qubits":1,"factors":[],"order":"right-to-left"}"#,
    )
    .unwrap();
    assert_eq!(code(&run(&["info", path_str(&bad)])), 2);
}
