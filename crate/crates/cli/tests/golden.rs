use std::path::{Path, PathBuf};
use std::process::Command;

use pegarmy_cli::docs::{read_json, RunManifest};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Runs a command that writes `out`, returning its bytes and the manifest result.
fn run(args: &[&str], dir: &Path, out: &str) -> (Vec<u8>, serde_json::Value) {
    let out = dir.join(out);
    let manifest = dir.join("run.manifest.json");
    let status = Command::new(env!("CARGO_BIN_EXE_pegarmy"))
        .args(args)
        .arg("-o")
        .arg(&out)
        .arg("--manifest")
        .arg(&manifest)
        .env_remove("PEGARMY_BUDGET_MS")
        .status()
        .unwrap();
    assert!(status.success(), "{args:?}");
    let m: RunManifest = read_json(&manifest).unwrap();
    (std::fs::read(&out).unwrap(), m.result)
}

fn golden(args: &[&str], out: &str, expected: &str) {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (first, ra) = run(args, a.path(), out);
    let (second, rb) = run(args, b.path(), out);
    assert!(first == second, "{args:?} not reproducible");
    assert_eq!(ra, rb);
    let want = std::fs::read(fixtures().join("golden").join(expected)).unwrap();
    assert!(first == want, "{args:?} differs from {expected}");
}

fn arg(name: &str) -> String {
    fixtures().join(name).to_str().unwrap().to_owned()
}

#[test]
fn order_square7() {
    golden(
        &["order", &arg("square7_relaxed.json")],
        "o.json",
        "square7_ordered.json",
    );
}

#[test]
fn order_army11() {
    golden(&["order", &arg("army11_relaxed.json")], "o.json", "army11_ordered.json");
}

#[test]
fn render_square7() {
    golden(&["render", &arg("golden/square7_ordered.json")], "r.svg", "square7.svg");
}

#[test]
fn solve_square3() {
    let args = [
        "solve",
        "--shape",
        "square",
        "--size",
        "3",
        "--margin",
        "2",
        "--minimize",
    ];
    golden(&args, "x.json", "square3_relaxed.json");
}
