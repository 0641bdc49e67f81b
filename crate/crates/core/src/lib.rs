//! Toolkit for peg-solitaire armies: boards and deserts, the relaxed
//! integer program over reversed moves, ordering relaxed solutions into
//! legal play, replay verification, reachability search and the circuit
//! compiler built from solitaire gadgets.

pub mod board;
pub mod moves;
pub mod ordering;
pub mod reachability;
pub mod reduction;
pub mod relaxed;
pub mod solver;
pub mod verifier;

pub use board::{
    half_plane_desert, make_board, mirror, Ambient, Axis, Board, BoardError, BoardFile, Configuration, Position,
    ShapeKind, ShapeSpec,
};
pub use moves::{
    apply_relaxed, apply_strict, enumerate_jump_moves, make_custom_moveset, Direction, Jump, Move, MoveError,
    MoveMatrix,
};
pub use ordering::{
    check_ordered, extend_to_maximal, forget_order, order_solution, order_solution_with, reverse_to_forward,
    subtract_solution, OrderError, OrderedFile, OrderedSolution, ReductionKind, ReductionTrace,
};
pub use reachability::{
    achievable_output_sets, reachability_equiv_oracle, search_target, Limits, PortFamily, ReachError, SearchResult,
};
pub use reduction::{
    compile_circuit, gadget_contract, validate_circuit, verify_gadget, CircuitGraph, CompileError, CompiledInstance,
    GadgetReport, GadgetSpec, LayoutFailure, Violation,
};
pub use relaxed::{
    build_ilp, exhaustive_feasible, export_lp, import_solution, lp_string, parse_solution, solution_listing,
    IlpInstance, ImportError, Objective, RelaxedError, RelaxedFile, RelaxedSolution, DEFAULT_CAP,
};
pub use solver::{solve_internal, SolveError, SolveOptions, SolveOutcome, SolveStats};
pub use verifier::{
    army_board, expand_script, initial_config_of_script, parse_move_script, replay_forward, verify_from, verify_jumps,
    IllegalJump, MoveScript, VerifyReport, ARMY_11X11,
};
