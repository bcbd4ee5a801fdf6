use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fbi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbi"))
        .args(args)
        .output()
        .expect("spawn fbi")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/configs")
        .join(name)
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn unitarity_succeeds_with_hash_line() {
    let out = fbi(&["unitarity", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("# config_sha256="));
    assert!(stdout.contains("distribution,h,ratio,deviation"));
}

#[test]
fn empty_ladder_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", r#"{"ladder": []}"#);
    let out = fbi(&["unitarity", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_field_and_missing_file_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", r#"{"ladders": [0.1]}"#);
    assert_eq!(fbi(&["egorov", "--config", p.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(fbi(&["egorov", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn mismatched_command_tag_is_rejected() {
    let out = fbi(&["unitarity", "--config", config("scan_heaviside.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn heaviside_scan_detects_only_the_origin_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = fbi(&[
        "wavefront",
        "scan",
        "--config",
        config("scan_heaviside.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("heaviside_scan.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config_sha256="));
    assert_eq!(lines.next().unwrap(), "y,eta,rate,sigma,classification");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let expect = if r[0] == "0" { "in_WF" } else { "not_in_WF" };
        assert_eq!(r[4], expect, "row {r:?}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("heaviside.json")).unwrap())
            .unwrap();
    assert_eq!(summary["summary"]["projection"], serde_json::json!([0.0]));
    assert_eq!(summary["command"], "wavefront-scan");
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config("scan_heaviside.json");
    for (dir, threads) in [(&a, "1"), (&b, "4")] {
        let out = fbi(&[
            "wavefront",
            "scan",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["heaviside_scan.csv", "heaviside.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn symbol_compose_reports_the_commutator() {
    let dir = tempfile::tempdir().unwrap();
    // p = ξ, q = x at the origin of C²; ξ#x − x#ξ = h/i.
    let sym = |e: [u32; 2]| {
        format!(
            r#"{{"n": 1, "base": [[0,0],[0,0]], "m": 0, "K": 1, "D": 1,
               "coeffs": [[{{"e": [{}, {}], "c": [1, 0]}}], []]}}"#,
            e[0], e[1]
        )
    };
    let body = format!(
        r#"{{"symbol": {{"p": {}, "q": {}, "k_out": 1}}}}"#,
        sym([0, 1]),
        sym([1, 0])
    );
    let p = write(dir.path(), "c.json", &body);
    let out = fbi(&["symbol", "compose", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // h¹ coefficient of ξ#x is ∂_ξ ξ · ∂_x x / i = −i.
    assert!(stdout.contains("1,0 0,0,-1"), "{stdout}");
}

#[test]
fn affine_symbol_inverts_exactly_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = fbi(&[
        "symbol",
        "invert",
        "--config",
        config("invert_affine.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("symbol-invert_residual.csv")).unwrap();
    assert!(csv.lines().skip(2).all(|l| l.ends_with(",0")), "{csv}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("symbol-invert.json")).unwrap())
            .unwrap();
    // The returned inverse parses back as a symbol.
    let q: fbi::dto::FormalSymbolDto =
        serde_json::from_value(v["summary"]["symbol"].clone()).unwrap();
    assert_eq!(q.k, 4);
    assert!(q.to_symbol().is_ok());
}

#[test]
fn quantmult_reports_failure_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "q.json", r#"{"ladder": [0.2, 0.1]}"#);
    let out = fbi(&["quantmult", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
