use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pegarmy::{BoardFile, Position, RelaxedFile};
use pegarmy_cli::docs::{read_json, RunManifest};
use pegarmy_cli::OrderedDoc;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn army_script() -> PathBuf {
    root().join("crates/core/data/army11.txt")
}

fn pegarmy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pegarmy"))
        .args(args)
        .env_remove("PEGARMY_BUDGET_MS")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_trivial_square() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let o = pegarmy(&[
        "solve",
        "--shape",
        "square",
        "--size",
        "1",
        "--margin",
        "2",
        "--minimize",
        "-o",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let file: RelaxedFile = read_json(&out).unwrap();
    assert_eq!(file.total, 1);
    let m: RunManifest = read_json(&dir.path().join("x.manifest.json")).unwrap();
    assert_eq!(m.command, "solve");
    assert_eq!(m.result["status"], "feasible");
    assert_eq!(m.parameters["margin"], 2);
}

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = pegarmy(&[
        "solve",
        "--shape",
        "half-plane",
        "--size",
        "5",
        "--margin",
        "2",
        "--manifest",
        s(&m),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = pegarmy(&[
        "solve",
        "--shape",
        "square",
        "--size",
        "7",
        "--symmetry",
        "vertical",
        "--minimize",
        "--node-limit",
        "1",
        "--manifest",
        s(&m),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let manifest: RunManifest = read_json(&m).unwrap();
    assert_eq!(manifest.exit_code, 3);
    assert_eq!(manifest.result["status"], "budget-exhausted");
    let o = pegarmy(&["solve", "--size", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = Command::new(env!("CARGO_BIN_EXE_pegarmy"))
        .args([
            "solve",
            "--shape",
            "square",
            "--size",
            "1",
            "--margin",
            "2",
            "--manifest",
            s(&m),
        ])
        .env("PEGARMY_BUDGET_MS", "1234")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let manifest: RunManifest = read_json(&m).unwrap();
    assert_eq!(manifest.parameters["budget_ms"], 1234);
}

#[test]
fn export_lp_only() {
    let dir = tempfile::tempdir().unwrap();
    let board = BoardFile {
        cells: (1..=3).map(|x| Position::new(x, 0)).collect(),
        desert: vec![Position::new(3, 0)],
        target: Position::new(3, 0),
    };
    let b = dir.path().join("b.json");
    std::fs::write(&b, serde_json::to_string(&board).unwrap()).unwrap();
    let lp = dir.path().join("out.lp");
    let o = pegarmy(&["solve", "--board", s(&b), "--export-lp", s(&lp)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.contains("x_0"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn import_external_solution() {
    let dir = tempfile::tempdir().unwrap();
    let board = BoardFile {
        cells: (1..=3).map(|x| Position::new(x, 0)).collect(),
        desert: vec![Position::new(3, 0)],
        target: Position::new(3, 0),
    };
    let b = dir.path().join("b.json");
    std::fs::write(&b, serde_json::to_string(&board).unwrap()).unwrap();
    let lp = dir.path().join("out.lp");
    pegarmy(&["solve", "--board", s(&b), "--export-lp", s(&lp)]);
    // the only useful move on this line: (1,2 <- 3)
    let cols = std::fs::read_to_string(&lp).unwrap();
    assert!(cols.contains("x_"));
    let sol = dir.path().join("sol.txt");
    let out = dir.path().join("x.json");
    for j in 0..4 {
        std::fs::write(&sol, format!("x_{j} 1\n")).unwrap();
        let o = pegarmy(&["solve", "--board", s(&b), "--import-solution", s(&sol), "-o", s(&out)]);
        if o.status.code() == Some(0) {
            let file: RelaxedFile = read_json(&out).unwrap();
            assert_eq!(file.total, 1);
            return;
        }
        assert_eq!(o.status.code(), Some(4));
    }
    panic!("no single-move solution imported");
}

#[test]
fn order_single_move_and_tampered() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.json");
    pegarmy(&[
        "solve",
        "--shape",
        "square",
        "--size",
        "1",
        "--margin",
        "2",
        "-o",
        s(&x),
    ]);
    let ordered = dir.path().join("o.json");
    let o = pegarmy(&["order", s(&x), "-o", s(&ordered)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: OrderedDoc = read_json(&ordered).unwrap();
    assert_eq!(doc.forward.len(), 1);
    assert_eq!(doc.reversed.len(), 1);

    let mut file: RelaxedFile = read_json(&x).unwrap();
    file.moves[0].count = 2;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let o = pegarmy(&["order", s(&bad), "-o", s(&dir.path().join("never.json"))]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!dir.path().join("never.json").exists());
}

#[test]
fn verify_bundled_script() {
    let o = pegarmy(&["verify", s(&army_script())]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "246 moves, legal, start outside desert, target conquered"
    );
}

#[test]
fn verify_script_with_deleted_jump() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(army_script()).unwrap();
    let cut = text.replacen("(-9,-2,R), ", "", 1);
    assert_ne!(cut, text);
    let script = dir.path().join("cut.txt");
    std::fs::write(&script, cut).unwrap();
    let o = pegarmy(&["verify", s(&script), "--start", s(&fixture("army11_start.json"))]);
    assert_eq!(o.status.code(), Some(4));
    let line = stdout(&o);
    assert!(line.contains("illegal") && line.contains("jump "), "{line}");
}

#[test]
fn verify_empty_script_with_peg_on_target() {
    let dir = tempfile::tempdir().unwrap();
    let doc = OrderedDoc {
        board: BoardFile {
            cells: vec![Position::new(0, 0), Position::new(1, 0)],
            desert: vec![],
            target: Position::new(0, 0),
        },
        reversed_start: vec![Position::new(0, 0)],
        relaxed_total: 0,
        reversed: vec![],
        army: vec![Position::new(0, 0)],
        forward: vec![],
        trace: Default::default(),
    };
    let p = dir.path().join("empty.json");
    std::fs::write(&p, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = pegarmy(&["verify", s(&p), "--manifest", s(&dir.path().join("m.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0 moves, legal"));
}

#[test]
fn render_frames() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.json");
    pegarmy(&[
        "solve",
        "--shape",
        "square",
        "--size",
        "1",
        "--margin",
        "2",
        "-o",
        s(&x),
    ]);
    let ordered = dir.path().join("o.json");
    pegarmy(&["order", s(&x), "-o", s(&ordered)]);
    let frames = dir.path().join("frames");
    let o = pegarmy(&["render", s(&ordered), "--format", "frames", "-o", s(&frames)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&frames).unwrap().count(), 2);
    let svg = dir.path().join("anim.svg");
    let o = pegarmy(&["render", s(&ordered), "-o", s(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn render_fixture_frames() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames");
    let o = pegarmy(&["render", s(&army_script()), "--format", "frames", "-o", s(&frames)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&frames).unwrap().count(), 247);
}

#[test]
fn render_invalid_script_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("bad.txt");
    std::fs::write(&script, "Platoon A: (0,0,R), (0,0,R)\n").unwrap();
    let out = dir.path().join("out.svg");
    let o = pegarmy(&["render", s(&script), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!out.exists());
}

#[test]
fn compile_identity_and_reject_bad_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let board = dir.path().join("id.json");
    let o = pegarmy(&[
        "compile",
        s(&fixture("circuits/identity.json")),
        "-o",
        s(&board),
        "--decide",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let b: BoardFile = read_json(&board).unwrap();
    assert!(b.desert.is_empty());
    let side: pegarmy_cli::CompileSidecar = read_json(&dir.path().join("id.provenance.json")).unwrap();
    assert_eq!(side.provenance.len(), 1);
    assert_eq!(side.decision.unwrap().exact, Some(true));

    let o = pegarmy(&[
        "compile",
        s(&fixture("circuits/bad_nand.json")),
        "-o",
        s(&dir.path().join("bad.json")),
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("in-degree exactly 2"));
}

#[test]
fn test_gadget_reports() {
    let o = pegarmy(&["test-gadget", "and", "wire", "dr-fan-out", "--manifest", "/dev/null"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS and") && out.contains("PASS wire") && out.contains("PASS dr-fan-out"));
    let o = pegarmy(&["test-gadget", "nope", "--manifest", "/dev/null"]);
    assert_eq!(o.status.code(), Some(4));
}
