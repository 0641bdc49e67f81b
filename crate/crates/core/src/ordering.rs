//! Turning a relaxed solution into a legal move order.
//!
//! The loop keeps a played prefix and plays any remaining unit that keeps
//! the configuration strict. When no such unit exists, either the remainder
//! `z` already satisfies `A z >= 0`, or a chain of blocked units closes into
//! a cycle with nonnegative image. In both cases a maximal nonnegative part
//! is cut out of `x`, which stays a relaxed solution, and the loop starts
//! over on the smaller vector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::Position;
use crate::moves::{Jump, Move, MoveMatrix};
use crate::relaxed::{IlpInstance, RelaxedError, RelaxedSolution};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedSolution {
    moves: Vec<usize>,
}

impl OrderedSolution {
    pub fn new(moves: Vec<usize>) -> Self {
        OrderedSolution { moves }
    }

    /// Column indices in play order.
    pub fn moves(&self) -> &[usize] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Multiplicity vector of the sequence.
    pub fn counts(&self, m: usize) -> Vec<u32> {
        let mut x = vec![0u32; m];
        for &j in &self.moves {
            x[j] += 1;
        }
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Claim1Reduce,
    Claim2CycleReduce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    /// Sparse `(column, multiplicity)` of the removed vector.
    pub removed: Vec<(usize, u32)>,
    pub total_before: u64,
    pub total_after: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub restarts: u64,
    pub unit_scans: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("input is not a relaxed solution: {0}")]
    Invalid(#[from] RelaxedError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal contract violated: {0}")]
    InternalContractViolation(String),
    #[error("step {step}: column {column} is not a reversed jump")]
    NotAJump { step: usize, column: usize },
    #[error("step {step}: cell {position} holds {count} pegs")]
    IllegalPrefix {
        step: usize,
        position: Position,
        count: i64,
    },
    #[error("step {step}: column {column} out of range")]
    UnknownColumn { step: usize, column: usize },
    #[error("final configuration exceeds cap {cap} at {position}")]
    FinalCap { position: Position, cap: i32 },
    #[error("move {0} is not in the move set")]
    UnknownMove(usize),
}

fn image(moves: &MoveMatrix, v: &[u32]) -> Vec<i64> {
    let wide: Vec<i64> = v.iter().map(|&k| k as i64).collect();
    moves.apply_vector(&wide)
}

fn can_add(moves: &MoveMatrix, ay: &[i64], j: usize) -> bool {
    moves.column(j).loss.is_none_or(|l| ay[l] >= 1)
}

/// Greedily grow `z` inside `x` while keeping `A y >= 0`, smallest column
/// first, until no single unit can be added.
pub fn extend_to_maximal(moves: &MoveMatrix, x: &[u32], z: &[u32]) -> Result<Vec<u32>, OrderError> {
    if x.len() != moves.len() || z.len() != moves.len() {
        return Err(OrderError::Precondition("vector length differs from move count".into()));
    }
    if let Some(j) = (0..x.len()).find(|&j| z[j] > x[j]) {
        return Err(OrderError::Precondition(format!("z exceeds x at column {j}")));
    }
    let mut ay = image(moves, z);
    if let Some(i) = ay.iter().position(|&v| v < 0) {
        return Err(OrderError::Precondition(format!("A z is negative at row {i}")));
    }
    let mut y = z.to_vec();
    loop {
        let mut grew = false;
        for j in 0..y.len() {
            while y[j] < x[j] && can_add(moves, &ay, j) {
                y[j] += 1;
                for (i, a) in moves.column(j).entries() {
                    ay[i] += a as i64;
                }
                grew = true;
            }
        }
        if !grew {
            return Ok(y);
        }
    }
}

/// `x - y`, re-validated as a relaxed solution.
pub fn subtract_solution(ilp: &IlpInstance, x: &[u32], y: &[u32]) -> Result<Vec<u32>, OrderError> {
    if x.len() != y.len() || y.iter().zip(x).any(|(a, b)| a > b) {
        return Err(OrderError::Precondition("y is not below x".into()));
    }
    let rest: Vec<u32> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    ilp.check(&rest)
        .map_err(|e| OrderError::InternalContractViolation(format!("x - y is not a solution: {e}")))?;
    Ok(rest)
}

/// Order a relaxed solution with smallest-index tie-breaking.
pub fn order_solution(ilp: &IlpInstance, x: &RelaxedSolution) -> Result<(OrderedSolution, ReductionTrace), OrderError> {
    order_solution_with(ilp, x, |_| 0)
}

/// Order a relaxed solution. `choose(k)` picks one of `k` candidates
/// (listed in increasing index order) wherever the procedure has a free
/// choice; it must return a value below `k`.
pub fn order_solution_with(
    ilp: &IlpInstance,
    x: &RelaxedSolution,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<(OrderedSolution, ReductionTrace), OrderError> {
    let moves = ilp.moves();
    ilp.check(x.x())?;
    if ilp.b().iter().any(|&v| !(0..=1).contains(&v)) {
        return Err(OrderError::Precondition("start is not strict".into()));
    }
    let m = moves.len();
    let mut pick = |k: usize| {
        let c = choose(k);
        assert!(c < k, "chooser returned {c} for {k} candidates");
        c
    };
    let mut x: Vec<u32> = x.x().to_vec();
    let mut trace = ReductionTrace::default();
    'restart: loop {
        trace.restarts += 1;
        let mut state: Vec<i64> = ilp.b().iter().map(|&v| v as i64).collect();
        let mut z = x.clone();
        let mut played = Vec::new();
        loop {
            if z.iter().all(|&k| k == 0) {
                return Ok((OrderedSolution::new(played), trace));
            }
            let az = image(moves, &z);
            if az.iter().all(|&v| v >= 0) {
                let y = extend_to_maximal(moves, &x, &z)?;
                x = reduce(ilp, &x, y, ReductionKind::Claim1Reduce, &mut trace)?;
                continue 'restart;
            }
            trace.unit_scans += 1;
            let units: Vec<usize> = (0..m).filter(|&j| z[j] > 0 && can_add(moves, &state, j)).collect();
            if units.is_empty() {
                return Err(OrderError::InternalContractViolation(
                    "no remaining unit keeps the configuration nonnegative".into(),
                ));
            }
            let playable: Vec<usize> = units
                .iter()
                .copied()
                .filter(|&j| moves.column(j).gains.iter().all(|&i| state[i] == 0))
                .collect();
            if !playable.is_empty() {
                let j = playable[pick(playable.len())];
                for (i, a) in moves.column(j).entries() {
                    state[i] += a as i64;
                }
                z[j] -= 1;
                played.push(j);
                continue;
            }
            let cycle = blocked_cycle(moves, &state, &z, units[pick(units.len())], &mut pick)?;
            let mut zc = vec![0u32; m];
            for &j in &cycle {
                zc[j] += 1;
            }
            if (0..m).any(|j| zc[j] > z[j]) {
                return Err(OrderError::InternalContractViolation(
                    "cycle exceeds the remaining vector".into(),
                ));
            }
            if image(moves, &zc).iter().any(|&v| v < 0) {
                return Err(OrderError::InternalContractViolation("cycle image is negative".into()));
            }
            let y = extend_to_maximal(moves, &x, &zc)?;
            x = reduce(ilp, &x, y, ReductionKind::Claim2CycleReduce, &mut trace)?;
        }
    }
}

fn reduce(
    ilp: &IlpInstance,
    x: &[u32],
    y: Vec<u32>,
    kind: ReductionKind,
    trace: &mut ReductionTrace,
) -> Result<Vec<u32>, OrderError> {
    let before: u64 = x.iter().map(|&k| k as u64).sum();
    let rest = subtract_solution(ilp, x, &y)?;
    let after: u64 = rest.iter().map(|&k| k as u64).sum();
    if after >= before {
        return Err(OrderError::InternalContractViolation(
            "reduction removed nothing".into(),
        ));
    }
    trace.steps.push(ReductionStep {
        kind,
        removed: y
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k > 0)
            .map(|(j, &k)| (j, k))
            .collect(),
        total_before: before,
        total_after: after,
    });
    Ok(rest)
}

/// Follow blocked units: each one gains on an occupied cell, whose peg must
/// be removed later by another remaining unit. Returns the first cycle.
fn blocked_cycle(
    moves: &MoveMatrix,
    state: &[i64],
    z: &[u32],
    start: usize,
    pick: &mut impl FnMut(usize) -> usize,
) -> Result<Vec<usize>, OrderError> {
    let mut chain = vec![start];
    loop {
        let u = *chain.last().unwrap();
        let occupied: Vec<usize> = moves
            .column(u)
            .gains
            .iter()
            .copied()
            .filter(|&i| state[i] == 1)
            .collect();
        if occupied.is_empty() {
            return Err(OrderError::InternalContractViolation(format!(
                "column {u} is not blocked"
            )));
        }
        let i = occupied[pick(occupied.len())];
        let removers: Vec<usize> = moves
            .row(i)
            .iter()
            .filter(|&&(v, a)| a < 0 && z[v] > u32::from(v == u))
            .map(|&(v, _)| v)
            .collect();
        if removers.is_empty() {
            return Err(OrderError::InternalContractViolation(format!(
                "no remaining unit removes the peg at row {i}"
            )));
        }
        let v = removers[pick(removers.len())];
        if let Some(s) = chain.iter().position(|&w| w == v) {
            return Ok(chain.split_off(s));
        }
        chain.push(v);
    }
}

/// Strict replay of an ordered sequence: every intermediate configuration
/// is 0/1 and the final one respects the caps `c`.
pub fn check_ordered(ilp: &IlpInstance, seq: &OrderedSolution) -> Result<Vec<i64>, OrderError> {
    let moves = ilp.moves();
    let board = ilp.board();
    let mut state: Vec<i64> = ilp.b().iter().map(|&v| v as i64).collect();
    for (step, &j) in seq.moves().iter().enumerate() {
        if j >= moves.len() {
            return Err(OrderError::UnknownColumn { step, column: j });
        }
        for (i, a) in moves.column(j).entries() {
            state[i] += a as i64;
        }
        if let Some(i) = state.iter().position(|&v| !(0..=1).contains(&v)) {
            return Err(OrderError::IllegalPrefix {
                step,
                position: board.cell(i),
                count: state[i],
            });
        }
    }
    if let Some(i) = (0..state.len()).find(|&i| state[i] > ilp.c()[i] as i64) {
        return Err(OrderError::FinalCap {
            position: board.cell(i),
            cap: ilp.c()[i],
        });
    }
    Ok(state)
}

/// The forward game: reversed order, each `(p1, p2 <- p3)` read as the peg
/// at `p1` jumping over `p2` onto `p3`.
pub fn reverse_to_forward(moves: &MoveMatrix, seq: &OrderedSolution) -> Result<Vec<Jump>, OrderError> {
    let n = seq.len();
    seq.moves()
        .iter()
        .enumerate()
        .rev()
        .map(|(step, &j)| {
            if j >= moves.len() {
                return Err(OrderError::UnknownColumn { step, column: j });
            }
            moves.get(j).as_jump().ok_or(OrderError::NotAJump { step, column: j })
        })
        .collect::<Result<Vec<_>, _>>()
        .inspect(|v| debug_assert_eq!(v.len(), n))
}

/// Relaxed multiset of a forward game: every jump reversed, order dropped.
pub fn forget_order(moves: &MoveMatrix, jumps: &[Jump]) -> Result<Vec<u32>, OrderError> {
    let mut x = vec![0u32; moves.len()];
    for (k, j) in jumps.iter().enumerate() {
        let col = moves.position_of(&j.reversed()).ok_or(OrderError::UnknownMove(k))?;
        x[col] += 1;
    }
    Ok(x)
}

/// JSON form: `{ "moves": [ { "gains": [[x,y],...], "loss": [x,y] }, ... ] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedFile {
    pub moves: Vec<Move>,
}

impl OrderedFile {
    pub fn from_solution(moves: &MoveMatrix, seq: &OrderedSolution) -> Self {
        OrderedFile {
            moves: seq.moves().iter().map(|&j| moves.get(j).clone()).collect(),
        }
    }

    pub fn to_solution(&self, moves: &MoveMatrix) -> Result<OrderedSolution, OrderError> {
        let index: std::collections::HashMap<&Move, usize> =
            moves.moves().iter().enumerate().map(|(j, m)| (m, j)).collect();
        self.moves
            .iter()
            .enumerate()
            .map(|(k, m)| index.get(m).copied().ok_or(OrderError::UnknownMove(k)))
            .collect::<Result<Vec<_>, _>>()
            .map(OrderedSolution::new)
    }
}
