//! Subcommands. Each returns an [`Outcome`] that `main` turns into an exit
//! code and a manifest.

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pegarmy::reachability::Limits;
use pegarmy::reduction::{decide, gadget, GADGET_NAMES};
use pegarmy::{
    army_board, build_ilp, check_ordered, compile_circuit, enumerate_jump_moves, expand_script, export_lp,
    forget_order, half_plane_desert, import_solution, make_board, order_solution, parse_move_script,
    reverse_to_forward, solve_internal, verify_from, verify_gadget, verify_jumps, Ambient, Axis, Board, CircuitGraph,
    CompileError, Configuration, Objective, OrderedFile, Position, RelaxedFile, RelaxedSolution, ShapeSpec,
    SolveOptions, SolveOutcome, VerifyReport, DEFAULT_CAP,
};

use crate::docs::{read_json, to_json, write_json, CompileSidecar, DecisionDoc, OrderedDoc};
use crate::render::{animated_svg, frame_svg, replay_frames};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

/// Margin used for generated shapes when `--margin` is absent.
pub const DEFAULT_MARGIN: u32 = 3;
/// Default time budget when neither `--time-limit-ms` nor
/// `PEGARMY_BUDGET_MS` is given.
pub const DEFAULT_BUDGET_MS: u64 = 600_000;
pub const BUDGET_ENV: &str = "PEGARMY_BUDGET_MS";

#[derive(Debug, Parser)]
#[command(
    name = "pegarmy",
    version,
    about = "Peg-solitaire army solver, orderer, verifier and circuit compiler"
)]
pub struct Cli {
    /// Where to write the run manifest (default: next to the main output,
    /// or stderr when there is none).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the relaxed program and solve, export or import it.
    Solve(SolveArgs),
    /// Turn a relaxed solution into a legal ordered game.
    Order(OrderArgs),
    /// Replay a move script or an ordered game.
    Verify(VerifyArgs),
    /// Draw a replayed game as SVG.
    Render(RenderArgs),
    /// Compile a NAND circuit into a reachability board.
    Compile(CompileArgs),
    /// Check library gadgets against their contracts.
    TestGadget(TestGadgetArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Square,
    Rhombus,
    /// Conway's setting: `--size` is the target's distance into the desert.
    HalfPlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AmbientArg {
    FullPlane,
    HalfPlane,
    DiagonalHalfPlane,
    ThreeTangentHalfPlanes,
}

impl From<AmbientArg> for Ambient {
    fn from(a: AmbientArg) -> Self {
        match a {
            AmbientArg::FullPlane => Ambient::FullPlane,
            AmbientArg::HalfPlane => Ambient::HalfPlane,
            AmbientArg::DiagonalHalfPlane => Ambient::DiagonalHalfPlane,
            AmbientArg::ThreeTangentHalfPlanes => Ambient::ThreeTangentHalfPlanes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SymmetryArg {
    None,
    Vertical,
    Horizontal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Svg,
    Frames,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["shape", "board"]))]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    /// Desert side (or target distance for half-plane).
    #[arg(long, requires = "shape")]
    pub size: Option<u32>,
    #[arg(long)]
    pub margin: Option<u32>,
    #[arg(long, value_enum, default_value = "full-plane")]
    pub ambient: AmbientArg,
    /// Board JSON instead of a generated shape.
    #[arg(long)]
    pub board: Option<PathBuf>,
    /// Upper bound on each move multiplicity.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u32,
    #[arg(long, value_enum, default_value = "none")]
    pub symmetry: SymmetryArg,
    /// Minimize the number of moves instead of stopping at the first
    /// solution.
    #[arg(long)]
    pub minimize: bool,
    /// Write the program in LP format and stop.
    #[arg(long, conflicts_with = "import_solution")]
    pub export_lp: Option<PathBuf>,
    /// Read an external solver's solution instead of solving.
    #[arg(long)]
    pub import_solution: Option<PathBuf>,
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Disable LP bounds in the internal search.
    #[arg(long)]
    pub no_lp_bound: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Relaxed solution JSON.
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScriptSource {
    /// Move script (platoon notation) or ordered JSON.
    pub input: PathBuf,
    /// Board for scripts (default: the bundled 11x11 army board).
    #[arg(long)]
    pub board: Option<PathBuf>,
    /// Initial pegs (JSON list of positions) instead of reconstructing the
    /// army from the script.
    #[arg(long)]
    pub start: Option<PathBuf>,
    /// Mirror axis for symmetric platoons.
    #[arg(long, value_enum, default_value = "vertical")]
    pub axis: SymmetryArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: ScriptSource,
    /// For ordered files, check only the forward jumps and skip the
    /// reversed sequence.
    #[arg(long)]
    pub forward: bool,
    /// Also write the script's relaxed multiset (order forgotten).
    #[arg(long)]
    pub export_relaxed: Option<PathBuf>,
    /// Also write the reconstructed army as a JSON position list.
    #[arg(long)]
    pub export_start: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: ScriptSource,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: RenderFormat,
    /// SVG file, or directory for frames.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Circuit JSON.
    pub input: PathBuf,
    /// Board JSON output.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Provenance sidecar (default: `<output>.provenance.json`).
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    /// Decide target reachability after compiling.
    #[arg(long)]
    pub decide: bool,
    /// State budget of the exact search.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_states: u64,
}

#[derive(Debug, Args)]
pub struct TestGadgetArgs {
    /// Gadget names (default: all).
    pub names: Vec<String>,
    #[arg(long, default_value_t = 5_000_000)]
    pub max_states: u64,
}

/// Exit code plus what goes into the manifest.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub parameters: Value,
    pub result: Value,
}

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_ERROR,
            error: e.into(),
        }
    }
}

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        error: e.into(),
    }
}

type Run = Result<Outcome, Failure>;

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Solve(a) => solve(a),
        Command::Order(a) => order(a),
        Command::Verify(a) => verify(a),
        Command::Render(a) => render(a),
        Command::Compile(a) => compile(a),
        Command::TestGadget(a) => test_gadget(a),
    }
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Solve(_) => "solve",
        Command::Order(_) => "order",
        Command::Verify(_) => "verify",
        Command::Render(_) => "render",
        Command::Compile(_) => "compile",
        Command::TestGadget(_) => "test-gadget",
    }
}

fn budget_ms(flag: Option<u64>) -> anyhow::Result<u64> {
    if let Some(ms) = flag {
        return Ok(ms);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{BUDGET_ENV}={v:?} is not a number")),
        Err(_) => Ok(DEFAULT_BUDGET_MS),
    }
}

fn axis(s: SymmetryArg) -> Option<Axis> {
    match s {
        SymmetryArg::None => None,
        SymmetryArg::Vertical => Some(Axis::Vertical),
        SymmetryArg::Horizontal => Some(Axis::Horizontal),
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_board(a: &SolveArgs) -> Result<Board, Failure> {
    if let Some(path) = &a.board {
        return Board::from_file(&read_json(path).map_err(invalid)?).map_err(invalid);
    }
    let shape = a.shape.expect("clap requires a source");
    let size = a.size.ok_or_else(|| anyhow!("--shape needs --size"))?;
    let margin = a.margin.unwrap_or(DEFAULT_MARGIN);
    let board = match shape {
        ShapeArg::Square => make_board(&ShapeSpec::square(size, margin).with_ambient(a.ambient.into())),
        ShapeArg::Rhombus => make_board(&ShapeSpec::rhombus(size, margin).with_ambient(a.ambient.into())),
        ShapeArg::HalfPlane => half_plane_desert(size, margin),
    };
    board.map_err(invalid)
}

fn solve(a: &SolveArgs) -> Run {
    let board = solve_board(a)?;
    let moves = enumerate_jump_moves(&board);
    let mut ilp = build_ilp(&board, &moves, &Configuration::single_peg_at_target(&board))
        .map_err(invalid)?
        .with_cap(a.cap);
    if a.minimize {
        ilp = ilp.with_objective(Objective::MinimizeTotalMoves);
    }
    let budget = budget_ms(a.time_limit_ms)?;
    let parameters = json!({
        "shape": a.shape.map(|s| format!("{s:?}").to_lowercase()),
        "size": a.size,
        "margin": a.board.is_none().then(|| a.margin.unwrap_or(DEFAULT_MARGIN)),
        "cap": a.cap,
        "symmetry": format!("{:?}", a.symmetry).to_lowercase(),
        "minimize": a.minimize,
        "budget_ms": budget,
        "node_limit": a.node_limit,
        "seed": Value::Null,
    });
    let mut inputs: Vec<PathBuf> = a.board.iter().cloned().collect();
    let outputs: Vec<PathBuf> = a.output.iter().cloned().collect();
    let shape = json!({ "cells": board.len(), "moves": moves.len() });
    if let Some(lp) = &a.export_lp {
        export_lp(&ilp, lp).with_context(|| format!("writing {}", lp.display()))?;
        eprintln!(
            "wrote LP with {} variables and {} rows to {}",
            ilp.n_moves(),
            2 * ilp.n_positions(),
            lp.display()
        );
        return Ok(Outcome {
            code: EXIT_OK,
            inputs,
            outputs: vec![lp.clone()],
            parameters,
            result: json!({ "status": "exported", "instance": shape }),
        });
    }
    let (solution, result, code) = if let Some(path) = &a.import_solution {
        inputs.push(path.clone());
        let sol = import_solution(&ilp, path).map_err(invalid)?;
        let r = json!({ "status": "imported", "total": sol.total(), "instance": shape });
        (Some(sol), r, EXIT_OK)
    } else {
        let options = SolveOptions {
            time_limit: Some(Duration::from_millis(budget)),
            node_limit: a.node_limit,
            symmetry: axis(a.symmetry),
            lp_bound: !a.no_lp_bound,
        };
        let out = solve_internal(&ilp, &options).map_err(invalid)?;
        let stats = serde_json::to_value(out.stats())?;
        match out {
            SolveOutcome::Feasible {
                solution,
                proven_optimal,
                ..
            } => {
                let r = json!({
                    "status": "feasible",
                    "total": solution.total(),
                    "proven_optimal": proven_optimal,
                    "stats": stats,
                    "instance": shape,
                });
                (Some(solution), r, EXIT_OK)
            }
            SolveOutcome::Infeasible { .. } => (
                None,
                json!({ "status": "infeasible", "stats": stats, "instance": shape }),
                EXIT_INFEASIBLE,
            ),
            SolveOutcome::BudgetExhausted { .. } => (
                None,
                json!({ "status": "budget-exhausted", "stats": stats, "instance": shape }),
                EXIT_BUDGET,
            ),
        }
    };
    match &solution {
        Some(sol) => {
            emit(a.output.as_deref(), &to_json(&RelaxedFile::from_solution(&ilp, sol)))?;
            eprintln!("relaxed solution with {} moves", sol.total());
        }
        None => eprintln!("no solution: {}", result["status"].as_str().unwrap_or("")),
    }
    Ok(Outcome {
        code,
        inputs,
        outputs: if solution.is_some() { outputs } else { Vec::new() },
        parameters,
        result,
    })
}

/// Order a relaxed file into an [`OrderedDoc`].
pub fn order_file(file: &RelaxedFile) -> Result<OrderedDoc, Failure> {
    let board = Board::from_file(&file.board).map_err(invalid)?;
    let moves = enumerate_jump_moves(&board);
    let start = Configuration::from_pegs(&board, file.start.iter().copied()).map_err(invalid)?;
    let ilp = build_ilp(&board, &moves, &start).map_err(invalid)?;
    let x = file.to_vector(&ilp).map_err(invalid)?;
    let sol = RelaxedSolution::new(&ilp, x).map_err(invalid)?;
    let (seq, trace) = order_solution(&ilp, &sol)?;
    let end = check_ordered(&ilp, &seq)?;
    let forward = reverse_to_forward(&moves, &seq)?;
    Ok(OrderedDoc {
        board: file.board.clone(),
        reversed_start: file.start.clone(),
        relaxed_total: sol.total(),
        reversed: OrderedFile::from_solution(&moves, &seq).moves,
        army: (0..board.len())
            .filter(|&i| end[i] == 1)
            .map(|i| board.cell(i))
            .collect(),
        forward,
        trace,
    })
}

fn order(a: &OrderArgs) -> Run {
    let file: RelaxedFile = read_json(&a.input).map_err(invalid)?;
    let doc = order_file(&file)?;
    emit(a.output.as_deref(), &to_json(&doc))?;
    eprintln!("ordered {} of {} relaxed moves", doc.forward.len(), doc.relaxed_total);
    Ok(Outcome {
        code: EXIT_OK,
        inputs: vec![a.input.clone()],
        outputs: a.output.iter().cloned().collect(),
        parameters: json!({}),
        result: json!({
            "relaxed_total": doc.relaxed_total,
            "ordered_moves": doc.forward.len(),
            "reduction_steps": doc.trace.steps.len(),
            "army_pegs": doc.army.len(),
        }),
    })
}

/// A game ready to replay.
pub struct Game {
    pub board: Board,
    pub start: Configuration,
    pub jumps: Vec<pegarmy::Jump>,
    /// Reversed sequence of an ordered file, when there is one.
    reversed: Option<(Vec<Position>, Vec<pegarmy::Move>)>,
}

fn load_game(src: &ScriptSource) -> Result<Game, Failure> {
    let text = std::fs::read_to_string(&src.input).with_context(|| format!("reading {}", src.input.display()))?;
    let explicit_start = match &src.start {
        Some(p) => Some(read_json::<Vec<Position>>(p).map_err(invalid)?),
        None => None,
    };
    if text.trim_start().starts_with('{') {
        let doc: OrderedDoc = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", src.input.display()))
            .map_err(invalid)?;
        let board = Board::from_file(&doc.board).map_err(invalid)?;
        let pegs = explicit_start.unwrap_or(doc.army);
        let start = Configuration::from_pegs(&board, pegs).map_err(invalid)?;
        return Ok(Game {
            board,
            start,
            jumps: doc.forward,
            reversed: Some((doc.reversed_start, doc.reversed)),
        });
    }
    let script = parse_move_script(&text).map_err(invalid)?;
    let mirror = axis(src.axis).unwrap_or(Axis::Vertical);
    let jumps = expand_script(&script, mirror).map_err(invalid)?;
    let board = match &src.board {
        Some(p) => Board::from_file(&read_json(p).map_err(invalid)?).map_err(invalid)?,
        None => army_board(),
    };
    let start = match explicit_start {
        Some(pegs) => Configuration::from_pegs(&board, pegs).map_err(invalid)?,
        None => pegarmy::initial_config_of_script(&board, &jumps).map_err(invalid)?,
    };
    Ok(Game {
        board,
        start,
        jumps,
        reversed: None,
    })
}

fn verify(a: &VerifyArgs) -> Run {
    let src = &a.source;
    let mut inputs = vec![src.input.clone()];
    inputs.extend(src.board.iter().cloned());
    inputs.extend(src.start.iter().cloned());
    let text = std::fs::read_to_string(&src.input).with_context(|| format!("reading {}", src.input.display()))?;
    let is_script = !text.trim_start().starts_with('{');
    // a script without an explicit start reports reconstruction problems
    // itself, so it does not go through load_game
    let (board, report, jumps, reversed_error) = if is_script && src.start.is_none() {
        let script = parse_move_script(&text).map_err(invalid)?;
        let jumps = expand_script(&script, axis(src.axis).unwrap_or(Axis::Vertical)).map_err(invalid)?;
        let board = match &src.board {
            Some(p) => Board::from_file(&read_json(p).map_err(invalid)?).map_err(invalid)?,
            None => army_board(),
        };
        let report = verify_jumps(&board, &jumps);
        (board, report, jumps, None)
    } else {
        let game = load_game(src)?;
        let mut reversed_error = None;
        if let (false, Some((rstart, rmoves))) = (a.forward, &game.reversed) {
            reversed_error = check_reversed(&game, rstart, rmoves).err();
        }
        let report = verify_from(&game.board, &game.start, &game.jumps);
        (game.board, report, game.jumps, reversed_error)
    };
    let mut outputs = Vec::new();
    if let Some(path) = &a.export_relaxed {
        let moves = enumerate_jump_moves(&board);
        let ilp = build_ilp(&board, &moves, &Configuration::single_peg_at_target(&board)).map_err(invalid)?;
        let x = forget_order(&moves, &jumps).map_err(invalid)?;
        let sol = RelaxedSolution::new(&ilp, x).map_err(invalid)?;
        write_json(path, &RelaxedFile::from_solution(&ilp, &sol))?;
        outputs.push(path.clone());
    }
    if let Some(path) = &a.export_start {
        let start = pegarmy::initial_config_of_script(&board, &jumps).map_err(invalid)?;
        write_json(path, &start.pegs(&board).collect::<Vec<_>>())?;
        outputs.push(path.clone());
    }
    println!("{report}");
    if let Some(e) = &reversed_error {
        println!("reversed sequence rejected: {e}");
    }
    let ok = report.ok() && reversed_error.is_none();
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_INVALID },
        inputs,
        outputs,
        parameters: json!({ "forward_only": a.forward, "axis": format!("{:?}", src.axis).to_lowercase() }),
        result: report_json(&report, reversed_error.as_deref()),
    })
}

fn report_json(r: &VerifyReport, reversed_error: Option<&str>) -> Value {
    json!({
        "moves": r.moves,
        "initial_pegs": r.initial_pegs,
        "legal": r.legal,
        "start_outside_desert": r.start_outside_desert,
        "target_conquered": r.target_conquered,
        "error": r.error,
        "reversed_error": reversed_error,
    })
}

/// The reversed sequence must be legal and must be the forward game read
/// backwards.
fn check_reversed(game: &Game, rstart: &[Position], rmoves: &[pegarmy::Move]) -> Result<(), String> {
    let moves = enumerate_jump_moves(&game.board);
    let start = Configuration::from_pegs(&game.board, rstart.iter().copied()).map_err(|e| e.to_string())?;
    let ilp = build_ilp(&game.board, &moves, &start).map_err(|e| e.to_string())?;
    let seq = OrderedFile { moves: rmoves.to_vec() }
        .to_solution(&moves)
        .map_err(|e| e.to_string())?;
    check_ordered(&ilp, &seq).map_err(|e| e.to_string())?;
    let forward = reverse_to_forward(&moves, &seq).map_err(|e| e.to_string())?;
    if forward != game.jumps {
        return Err("forward jumps do not match the reversed sequence".into());
    }
    Ok(())
}

fn render(a: &RenderArgs) -> Run {
    let game = load_game(&a.source)?;
    let frames = replay_frames(&game.board, &game.start, &game.jumps).map_err(invalid)?;
    let mut outputs = Vec::new();
    match a.format {
        RenderFormat::Svg => {
            std::fs::write(&a.output, animated_svg(&game.board, &frames))
                .with_context(|| format!("writing {}", a.output.display()))?;
            outputs.push(a.output.clone());
        }
        RenderFormat::Frames => {
            std::fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
            let width = frames.len().to_string().len().max(4);
            for k in 0..frames.len() {
                let path = a.output.join(format!("frame_{k:0width$}.svg"));
                std::fs::write(&path, frame_svg(&game.board, &frames, k))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            outputs.push(a.output.clone());
        }
    }
    eprintln!("rendered {} frames", frames.len());
    Ok(Outcome {
        code: EXIT_OK,
        inputs: vec![a.source.input.clone()],
        outputs,
        parameters: json!({ "format": format!("{:?}", a.format).to_lowercase() }),
        result: json!({ "frames": frames.len(), "moves": game.jumps.len() }),
    })
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("provenance.json")
}

fn compile(a: &CompileArgs) -> Run {
    let g: CircuitGraph = read_json(&a.input).map_err(invalid)?;
    let inst = compile_circuit(&g).map_err(|e| match e {
        CompileError::Invalid(_) | CompileError::Layout(_) => invalid(e),
        other => Failure::from(other),
    })?;
    let exact = Limits::plain(a.max_states);
    let decision = if a.decide {
        let d = decide(&inst, &g, exact, Limits::default())?;
        Some(DecisionDoc::new(&d, exact))
    } else {
        None
    };
    let sidecar = a.sidecar.clone().unwrap_or_else(|| sidecar_path(&a.output));
    write_json(&a.output, &inst.board.to_file())?;
    write_json(
        &sidecar,
        &CompileSidecar {
            start: inst.start.pegs(&inst.board).collect(),
            target: inst.target,
            provenance: inst.provenance.clone(),
            lint: inst.lint.clone(),
            decision: decision.clone(),
        },
    )?;
    eprintln!(
        "compiled {} gadgets into {} cells ({} pegs)",
        inst.provenance.len(),
        inst.board.len(),
        inst.peg_count()
    );
    if let Some(d) = &decision {
        eprintln!(
            "target {} ({})",
            if d.reachable { "reachable" } else { "unreachable" },
            match d.exact {
                Some(_) => format!("exact search, {} states", d.exact_explored),
                None => format!("exact budget of {} states exhausted; staged runs", d.exact_budget),
            }
        );
    }
    Ok(Outcome {
        code: EXIT_OK,
        inputs: vec![a.input.clone()],
        outputs: vec![a.output.clone(), sidecar],
        parameters: json!({ "decide": a.decide, "max_states": a.max_states }),
        result: json!({
            "cells": inst.board.len(),
            "pegs": inst.peg_count(),
            "gadgets": inst.provenance.len(),
            "satisfiable": g.satisfying_assignment().is_some(),
            "decision": decision,
        }),
    })
}

fn test_gadget(a: &TestGadgetArgs) -> Run {
    let names: Vec<String> = if a.names.is_empty() {
        GADGET_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        a.names.clone()
    };
    let limits = Limits {
        max_states: a.max_states,
        reduction: true,
    };
    let mut results = Vec::new();
    let mut code = EXIT_OK;
    for name in &names {
        let spec = gadget(name).map_err(invalid)?;
        let t = std::time::Instant::now();
        match verify_gadget(&spec, limits) {
            Ok(report) => {
                let ms = t.elapsed().as_millis() as u64;
                println!(
                    "{} {} ({} states, {} ms)",
                    if report.passed() { "PASS" } else { "FAIL" },
                    name,
                    report.explored(),
                    ms
                );
                if !report.passed() {
                    println!("{report}");
                    code = code.max(EXIT_INVALID);
                }
                results.push(json!({ "gadget": name, "passed": report.passed(), "states": report.explored() }));
            }
            Err(e) => {
                println!("BUDGET {name}: {e}");
                if code == EXIT_OK {
                    code = EXIT_BUDGET;
                }
                results.push(json!({ "gadget": name, "passed": Value::Null, "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome {
        code,
        inputs: Vec::new(),
        outputs: Vec::new(),
        parameters: json!({ "max_states": a.max_states }),
        result: json!(results),
    })
}
