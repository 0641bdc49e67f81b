//! Shared inputs for the benchmarks.

use pegarmy::{
    army_board, build_ilp, enumerate_jump_moves, expand_script, forget_order, make_board, parse_move_script, Axis,
    Configuration, IlpInstance, Jump, Objective, RelaxedSolution, ShapeSpec, ARMY_11X11,
};

/// Forward jumps of the bundled 11x11 army script.
pub fn army_jumps() -> Vec<Jump> {
    expand_script(&parse_move_script(ARMY_11X11).unwrap(), Axis::Vertical).unwrap()
}

/// The army script as an unordered relaxed solution.
pub fn army_relaxed() -> (IlpInstance, RelaxedSolution) {
    let board = army_board();
    let moves = enumerate_jump_moves(&board);
    let x = forget_order(&moves, &army_jumps()).unwrap();
    let ilp = build_ilp(&board, &moves, &Configuration::single_peg_at_target(&board)).unwrap();
    let sol = RelaxedSolution::new(&ilp, x).unwrap();
    (ilp, sol)
}

/// Minimisation program for a square desert.
pub fn square(side: u32, margin: u32) -> IlpInstance {
    let board = make_board(&ShapeSpec::square(side, margin)).unwrap();
    let moves = enumerate_jump_moves(&board);
    build_ilp(&board, &moves, &Configuration::single_peg_at_target(&board))
        .unwrap()
        .with_objective(Objective::MinimizeTotalMoves)
}
