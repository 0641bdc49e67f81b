mod common;

use pegarmy::reachability::{reachability_equiv_oracle, Limits};
use pegarmy::{
    apply_relaxed, check_ordered, enumerate_jump_moves, exhaustive_feasible, make_board, order_solution,
    order_solution_with, replay_forward, reverse_to_forward, solve_internal, Board, Configuration, Objective, Position,
    ShapeSpec, SolveOptions, SolveOutcome,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pegs(c: &Configuration) -> i64 {
    c.total()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Relaxed feasibility agrees with strict reachability under the same
    /// move caps, and the internal solver agrees with both.
    #[test]
    fn relaxed_matches_strict(seed in any::<u64>()) {
        let ilp = common::random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let relaxed = exhaustive_feasible(&ilp);
        let strict = reachability_equiv_oracle(&ilp, Limits::plain(2_000_000)).unwrap();
        prop_assert_eq!(relaxed.is_some(), strict);
        let solved = solve_internal(&ilp, &SolveOptions::default()).unwrap();
        prop_assert_eq!(matches!(solved, SolveOutcome::Feasible { .. }), strict);
        if let Some(sol) = solved.solution() {
            ilp.check(sol.x()).unwrap();
            sol.check_caps(&ilp).unwrap();
        }
    }

    /// Ordered output: every prefix strict, one peg gained per reversed
    /// move, N <= |x|, forward play legal with one peg lost per jump.
    #[test]
    fn ordered_output_is_legal(seed in any::<u64>()) {
        let ilp = common::random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let Some(x) = exhaustive_feasible(&ilp) else { return Ok(()) };
        let (seq, _) = order_solution(&ilp, &x).unwrap();
        prop_assert!(seq.len() as u64 <= x.total());
        let board = ilp.board();
        let moves = ilp.moves();
        let mut state = ilp.start();
        for &j in seq.moves() {
            let before = pegs(&state);
            state = pegarmy::apply_strict(board, &state, moves.get(j)).unwrap();
            prop_assert_eq!(pegs(&state), before + 1);
            prop_assert!(state.is_strict());
        }
        check_ordered(&ilp, &seq).unwrap();
        prop_assert!(state.pegs(board).all(|p| !board.is_desert_at(p)));
        let forward = reverse_to_forward(moves, &seq).unwrap();
        let mut cur = state.clone();
        for j in &forward {
            let next = replay_forward(board, &cur, std::slice::from_ref(j)).unwrap();
            prop_assert_eq!(pegs(&next), pegs(&cur) - 1);
            cur = next;
        }
        prop_assert_eq!(cur, ilp.start());
    }

    /// Any tie-breaking rule yields a legal ordering.
    #[test]
    fn random_tie_breaking(seed in any::<u64>(), pick in any::<u64>()) {
        let ilp = common::random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let Some(x) = exhaustive_feasible(&ilp) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let (seq, _) = order_solution_with(&ilp, &x, |n| rng.gen_range(0..n)).unwrap();
        prop_assert!(seq.len() as u64 <= x.total());
        check_ordered(&ilp, &seq).unwrap();
    }

    /// Ax + b does not depend on the order moves are applied in.
    #[test]
    fn relaxed_outcome_is_order_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ilp = common::random_instance(&mut rng);
        let x: Vec<u32> = (0..ilp.n_moves()).map(|_| rng.gen_range(0..=2)).collect();
        let mut seq: Vec<usize> = x.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(j, k as usize)).collect();
        rand::seq::SliceRandom::shuffle(seq.as_mut_slice(), &mut rng);
        let mut state = ilp.start();
        for &j in &seq {
            state = apply_relaxed(ilp.board(), &state, ilp.moves().get(j)).unwrap();
        }
        let expect = ilp.final_counts(&x);
        let got: Vec<i64> = state.counts().iter().map(|&v| v as i64).collect();
        prop_assert_eq!(got, expect);
    }

    /// Every generated move set has at most one -1 per column.
    #[test]
    fn fundamental_assumption(side in 1u32..=6, margin in 1u32..=3, rhombus in any::<bool>()) {
        let spec = if rhombus { ShapeSpec::rhombus(side | 1, margin) } else { ShapeSpec::square(side, margin) };
        let board = make_board(&spec).unwrap();
        prop_assert!(enumerate_jump_moves(&board).max_negative_entries() <= 1);
    }
}

#[test]
fn fundamental_assumption_on_random_boards() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let ilp = common::random_instance(&mut rng);
        assert!(ilp.moves().max_negative_entries() <= 1);
    }
}

#[test]
fn minimized_solution_is_no_larger_than_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 20 {
        let ilp = common::random_instance(&mut rng);
        let Some(x) = exhaustive_feasible(&ilp) else { continue };
        let min = ilp.clone().with_objective(Objective::MinimizeTotalMoves);
        let out = solve_internal(&min, &SolveOptions::default()).unwrap();
        let SolveOutcome::Feasible {
            solution,
            proven_optimal,
            ..
        } = out
        else {
            panic!("solver missed a solution")
        };
        assert!(proven_optimal);
        assert!(solution.total() <= x.total());
        checked += 1;
    }
}

#[test]
fn line_example_board() {
    let b = Board::new(
        (1..=5).map(|x| Position::new(x, 0)),
        [Position::new(3, 0), Position::new(5, 0)],
        Position::new(5, 0),
    )
    .unwrap();
    let ilp = pegarmy::build_ilp(&b, &enumerate_jump_moves(&b), &Configuration::single_peg_at_target(&b)).unwrap();
    let x = exhaustive_feasible(&ilp).unwrap();
    let (seq, _) = order_solution(&ilp, &x).unwrap();
    check_ordered(&ilp, &seq).unwrap();
}
