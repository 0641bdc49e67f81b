//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use pegarmy::reachability::{reachability_equiv_oracle, Limits};
use pegarmy::reduction::{decide, gadget, library, lint, GADGET_NAMES};
use pegarmy::{
    apply_relaxed, apply_strict, army_board, build_ilp, check_ordered, compile_circuit, enumerate_jump_moves,
    exhaustive_feasible, expand_script, forget_order, make_board, order_solution, parse_move_script, replay_forward,
    reverse_to_forward, verify_from, verify_gadget, verify_jumps, Axis, Board, CircuitGraph, Configuration,
    RelaxedFile, RelaxedSolution, ShapeSpec, ARMY_11X11,
};
use pegarmy_cli::cmd::order_file;
use pegarmy_cli::docs::read_json;
use pegarmy_cli::OrderedDoc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C1_JUMPS: usize = 212;
const C1_SECS: f64 = 1.0;
const C2_MAX_N: usize = 212;
const C2_SECS: f64 = 30.0;
const C3_INSTANCES: usize = 200;
const C3_ORACLE_STATES: u64 = 2_000_000;
const C3_SECS: f64 = 300.0;
const C4_MAX_MOVES: u64 = 15;
const C4_BUDGET_MS: u64 = 600_000;
const C5_FEASIBLE_MARGINS: [u32; 3] = [1, 2, 3];
const C5_CEILING: u32 = 8;
const C6_SECS: f64 = 60.0;
const C6_LIMITS: Limits = Limits {
    max_states: 5_000_000,
    reduction: true,
};
const C7_EXACT_STATES: u64 = 10_000_000;
const C8_INSTANCES: usize = 200;

struct Verdict {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Runs the CLI; returns the exit code.
fn pegarmy(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_pegarmy"))
        .args(args)
        .env_remove("PEGARMY_BUDGET_MS")
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fixture_replay() -> Verdict {
    let t = Instant::now();
    let script = parse_move_script(ARMY_11X11).unwrap();
    let jumps = expand_script(&script, Axis::Vertical).unwrap();
    let report = verify_jumps(&army_board(), &jumps);
    let elapsed = secs(t.elapsed());
    verdict(
        jumps.len() == C1_JUMPS && report.ok() && elapsed < C1_SECS,
        format!(
            "{} jumps (want {C1_JUMPS}), legal={}, start outside desert={}, target={}, {elapsed:.2}s (< {C1_SECS}s)",
            jumps.len(),
            report.legal,
            report.start_outside_desert,
            report.target_conquered
        ),
    )
}

fn ordering_pipeline() -> Verdict {
    let t = Instant::now();
    let file: RelaxedFile = read_json(&fixture("army11_relaxed.json")).unwrap();
    let board = army_board();
    let moves = enumerate_jump_moves(&board);
    let ilp = build_ilp(&board, &moves, &Configuration::single_peg_at_target(&board)).unwrap();
    let script = parse_move_script(ARMY_11X11).unwrap();
    let derived = forget_order(&moves, &expand_script(&script, Axis::Vertical).unwrap()).unwrap();
    let imported = file.to_vector(&ilp).unwrap();
    let same = derived == imported;
    let doc = order_file(&file).unwrap();
    let start = Configuration::from_pegs(&board, doc.army.iter().copied()).unwrap();
    let report = verify_from(&board, &start, &doc.forward);
    let elapsed = secs(t.elapsed());
    let n = doc.forward.len();
    verdict(
        same && n <= C2_MAX_N && n as u64 <= doc.relaxed_total && report.ok() && elapsed < C2_SECS,
        format!(
            "fixture matches script multiset={same}, N={n} (want <= {C2_MAX_N}), |x|={}, replay {}, {elapsed:.2}s (< {C2_SECS}s)",
            doc.relaxed_total,
            if report.ok() { "ok" } else { "failed" }
        ),
    )
}

fn equivalence_oracle() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut agree, mut feasible) = (0, 0);
    let mut first_bad = None;
    for k in 0..C3_INSTANCES {
        let ilp = common::random_instance(&mut rng);
        assert!(ilp.board().len() <= 15 && ilp.board().desert_len() <= 4);
        let relaxed = exhaustive_feasible(&ilp).is_some();
        let strict = reachability_equiv_oracle(&ilp, Limits::plain(C3_ORACLE_STATES)).unwrap();
        feasible += relaxed as usize;
        if relaxed == strict {
            agree += 1;
        } else {
            first_bad.get_or_insert(k);
        }
    }
    let elapsed = secs(t.elapsed());
    verdict(
        agree == C3_INSTANCES && elapsed < C3_SECS,
        format!(
            "{agree}/{C3_INSTANCES} agree ({feasible} feasible), first disagreement {first_bad:?}, {elapsed:.1}s (< {C3_SECS}s)"
        ),
    )
}

/// Orders `relaxed` and replays the result; returns the forward length.
fn order_and_replay(relaxed: &Path, dir: &Path) -> Option<usize> {
    let ordered = dir.join("ordered.json");
    if pegarmy(&["order", s(relaxed), "-o", s(&ordered)]) != 0 {
        return None;
    }
    if pegarmy(&["verify", s(&ordered), "--manifest", s(&dir.join("v.manifest.json"))]) != 0 {
        return None;
    }
    let doc: OrderedDoc = read_json(&ordered).ok()?;
    Some(doc.forward.len())
}

fn small_army() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("square7.json");
    let budget = C4_BUDGET_MS.to_string();
    let t = Instant::now();
    let code = pegarmy(&[
        "solve",
        "--shape",
        "square",
        "--size",
        "7",
        "--symmetry",
        "vertical",
        "--minimize",
        "--time-limit-ms",
        &budget,
        "-o",
        s(&out),
    ]);
    let elapsed = secs(t.elapsed());
    let fallback = order_and_replay(&fixture("square7_relaxed.json"), dir.path());
    let fixture_total = read_json::<RelaxedFile>(&fixture("square7_relaxed.json"))
        .unwrap()
        .total;
    let fallback_ok = fallback.is_some() && fixture_total <= C4_MAX_MOVES;
    let fallback_note = format!(
        "fallback fixture |x|={fixture_total} order+replay {}",
        if fallback.is_some() { "ok" } else { "failed" }
    );
    match code {
        0 => {
            let total = read_json::<RelaxedFile>(&out).unwrap().total;
            let replay = order_and_replay(&out, dir.path());
            verdict(
                total <= C4_MAX_MOVES && replay.is_some(),
                format!(
                    "symmetric solve |x|={total} (want <= {C4_MAX_MOVES}) in {elapsed:.1}s, order+replay {}; {fallback_note} (not applicable: solver finished)",
                    if replay.is_some() { "ok" } else { "failed" }
                ),
            )
        }
        3 => verdict(
            fallback_ok,
            format!("solver budget exhausted after {elapsed:.1}s; {fallback_note}"),
        ),
        c => verdict(false, format!("solve exited {c} after {elapsed:.1}s; {fallback_note}")),
    }
}

fn conway_bound() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let mut feasible_at = None;
    for margin in C5_FEASIBLE_MARGINS {
        let code = pegarmy(&[
            "solve",
            "--shape",
            "half-plane",
            "--size",
            "4",
            "--margin",
            &margin.to_string(),
            "--symmetry",
            "vertical",
            "--manifest",
            s(&m),
        ]);
        if code == 0 {
            feasible_at = Some(margin);
            break;
        }
    }
    let infeasible: Vec<u32> = (1..=C5_CEILING)
        .filter(|margin| {
            pegarmy(&[
                "solve",
                "--shape",
                "half-plane",
                "--size",
                "5",
                "--margin",
                &margin.to_string(),
                "--manifest",
                s(&m),
            ]) == 2
        })
        .collect();
    verdict(
        feasible_at.is_some() && infeasible.len() == C5_CEILING as usize,
        format!(
            "distance 4 feasible at margin {feasible_at:?}; distance 5 infeasible at margins {infeasible:?} of 1..={C5_CEILING} (box-relative evidence, not a proof)"
        ),
    )
}

fn gadget_suite() -> Verdict {
    let mut failed = Vec::new();
    let mut slowest = 0.0f64;
    for spec in library() {
        let t = Instant::now();
        let ok = verify_gadget(&spec, C6_LIMITS).map(|r| r.passed()).unwrap_or(false);
        let e = secs(t.elapsed());
        slowest = slowest.max(e);
        if !ok || e >= C6_SECS {
            failed.push(spec.name.clone());
        }
    }
    verdict(
        failed.is_empty(),
        format!(
            "{} gadgets, failing {failed:?}, slowest {slowest:.2}s (< {C6_SECS}s each)",
            GADGET_NAMES.len()
        ),
    )
}

fn brute_force_sat(g: &CircuitGraph) -> bool {
    let n = g.inputs.len();
    (0..1u64 << n).any(|m| g.output(&(0..n).map(|k| m >> k & 1 == 1).collect::<Vec<_>>()))
}

fn reduction() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, g) in [
        ("identity", CircuitGraph::identity()),
        ("constant-false", CircuitGraph::constant_false()),
    ] {
        let sat = brute_force_sat(&g);
        let inst = compile_circuit(&g).unwrap();
        let t = Instant::now();
        let d = decide(&inst, &g, Limits::plain(C7_EXACT_STATES), Limits::default()).unwrap();
        let elapsed = secs(t.elapsed());
        match d.exact {
            Some(reach) => {
                pass &= reach == sat;
                notes.push(format!(
                    "{name}: exact reachable={reach} sat={sat} ({} states, {elapsed:.1}s)",
                    d.exact_explored
                ));
            }
            None => {
                let used: std::collections::BTreeSet<&str> =
                    inst.provenance.iter().map(|p| p.gadget.as_str()).collect();
                let gadgets_ok = used
                    .iter()
                    .all(|n| verify_gadget(&gadget(n).unwrap(), C6_LIMITS).is_ok_and(|r| r.passed()));
                let lint_ok = lint(&inst.provenance).iter().all(|l| l.ok);
                let staged = !d.staged_reaching.is_empty();
                let witness_ok = d.witness.as_ref().is_none_or(|w| {
                    let r = verify_from(&inst.board, &inst.start, w);
                    r.legal && r.target_conquered
                });
                pass &= gadgets_ok && lint_ok && witness_ok && staged == sat;
                notes.push(format!(
                    "{name}: exact budget {C7_EXACT_STATES} exhausted in {elapsed:.1}s, compositional: gadgets ok={gadgets_ok}, lint ok={lint_ok}, staged reach={staged} sat={sat}"
                ));
            }
        }
    }
    verdict(pass, notes.join("; "))
}

fn property_suites() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    let mut problems = Vec::new();
    for _ in 0..C8_INSTANCES {
        let ilp = common::random_instance(&mut rng);
        if ilp.moves().max_negative_entries() > 1 {
            problems.push("fundamental assumption");
        }
        let x: Vec<u32> = (0..ilp.n_moves()).map(|_| rng.gen_range(0..=2)).collect();
        let mut seq: Vec<usize> = x
            .iter()
            .enumerate()
            .flat_map(|(j, &k)| std::iter::repeat_n(j, k as usize))
            .collect();
        rand::seq::SliceRandom::shuffle(seq.as_mut_slice(), &mut rng);
        let mut state = ilp.start();
        for &j in &seq {
            state = apply_relaxed(ilp.board(), &state, ilp.moves().get(j)).unwrap();
        }
        let got: Vec<i64> = state.counts().iter().map(|&v| v as i64).collect();
        if got != ilp.final_counts(&x) {
            problems.push("order invariance");
        }
        let Some(sol) = exhaustive_feasible(&ilp) else { continue };
        checked += 1;
        if !ordered_is_legal(ilp.board(), &ilp, &sol) {
            problems.push("ordered output");
        }
    }
    for spec in [
        ShapeSpec::square(7, 3),
        ShapeSpec::rhombus(7, 3),
        ShapeSpec::square(11, 3),
    ] {
        if enumerate_jump_moves(&make_board(&spec).unwrap()).max_negative_entries() > 1 {
            problems.push("fundamental assumption");
        }
    }
    for f in ["square7_relaxed.json", "conway_d4_relaxed.json", "army11_relaxed.json"] {
        let file: RelaxedFile = read_json(&fixture(f)).unwrap();
        let board = Board::from_file(&file.board).unwrap();
        let moves = enumerate_jump_moves(&board);
        let start = Configuration::from_pegs(&board, file.start.iter().copied()).unwrap();
        let ilp = build_ilp(&board, &moves, &start).unwrap();
        let sol = RelaxedSolution::new(&ilp, file.to_vector(&ilp).unwrap()).unwrap();
        if !ordered_is_legal(&board, &ilp, &sol) {
            problems.push("fixture ordering");
        }
    }
    let golden = [
        (vec!["order", "square7_relaxed.json"], "golden/square7_ordered.json"),
        (vec!["order", "army11_relaxed.json"], "golden/army11_ordered.json"),
    ];
    for (args, expected) in golden {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(args[1]);
        let runs: Vec<Vec<u8>> = (0..2)
            .map(|k| {
                let out = dir.path().join(format!("{k}.json"));
                pegarmy(&[args[0], s(&input), "-o", s(&out)]);
                std::fs::read(&out).unwrap_or_default()
            })
            .collect();
        if runs[0] != runs[1] || runs[0] != std::fs::read(fixture(expected)).unwrap() {
            problems.push("golden determinism");
        }
    }
    problems.dedup();
    verdict(
        problems.is_empty(),
        format!("{checked} random feasible instances and 3 fixtures ordered, 2 golden files; problems {problems:?}"),
    )
}

/// Prefix legality, +1 peg per reversed move, N <= |x|, and forward play
/// losing one peg per jump back to the start.
fn ordered_is_legal(board: &Board, ilp: &pegarmy::IlpInstance, sol: &RelaxedSolution) -> bool {
    let Ok((seq, _)) = order_solution(ilp, sol) else {
        return false;
    };
    if seq.len() as u64 > sol.total() || check_ordered(ilp, &seq).is_err() {
        return false;
    }
    let mut state = ilp.start();
    for &j in seq.moves() {
        let Ok(next) = apply_strict(board, &state, ilp.moves().get(j)) else {
            return false;
        };
        if next.total() != state.total() + 1 || !next.is_strict() {
            return false;
        }
        state = next;
    }
    if state.pegs(board).any(|p| board.is_desert_at(p)) {
        return false;
    }
    let Ok(forward) = reverse_to_forward(ilp.moves(), &seq) else {
        return false;
    };
    for j in &forward {
        let Ok(next) = replay_forward(board, &state, std::slice::from_ref(j)) else {
            return false;
        };
        if next.total() != state.total() - 1 {
            return false;
        }
        state = next;
    }
    state == ilp.start()
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture replay", fixture_replay),
        ("ordering pipeline on the fixture", ordering_pipeline),
        ("relaxed/strict equivalence oracle", equivalence_oracle),
        ("small-army solve", small_army),
        ("Conway bound", conway_bound),
        ("gadget suite", gadget_suite),
        ("reduction end-to-end", reduction),
        ("property suites", property_suites),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        failed += !v.pass as usize;
        println!(
            "criterion {id} {}: {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
