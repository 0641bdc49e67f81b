//! Moves of the reversed game and their incidence matrix.
//!
//! A move adds one peg on each gain cell and removes one from its loss cell.
//! Every column of the matrix carries at most one `-1` entry; the ordering
//! procedure depends on that.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, Configuration, Position};

/// Forward jump directions, in the fixed enumeration order used for columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Right,
    Left,
    Down,
    Up,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Right, Direction::Left, Direction::Down, Direction::Up];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Right => (1, 0),
            Direction::Left => (-1, 0),
            Direction::Down => (0, -1),
            Direction::Up => (0, 1),
        }
    }

    pub fn from_delta(dx: i32, dy: i32) -> Option<Self> {
        match (dx, dy) {
            (1, 0) => Some(Direction::Right),
            (-1, 0) => Some(Direction::Left),
            (0, -1) => Some(Direction::Down),
            (0, 1) => Some(Direction::Up),
            _ => None,
        }
    }

    /// Reflection across the vertical axis swaps left and right.
    pub fn mirrored(self) -> Self {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
            d => d,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Direction::Right => '→',
            Direction::Left => '←',
            Direction::Down => '↓',
            Direction::Up => '↑',
        }
    }

    pub fn ascii(self) -> char {
        match self {
            Direction::Right => 'R',
            Direction::Left => 'L',
            Direction::Down => 'D',
            Direction::Up => 'U',
        }
    }
}

/// A forward jump: the peg at `from` jumps over `from + d` onto `from + 2d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Jump {
    pub from: Position,
    pub dir: Direction,
}

impl Jump {
    pub fn new(x: i32, y: i32, dir: Direction) -> Self {
        Jump {
            from: Position::new(x, y),
            dir,
        }
    }

    pub fn over(&self) -> Position {
        let (dx, dy) = self.dir.delta();
        self.from.offset(dx, dy)
    }

    pub fn to(&self) -> Position {
        let (dx, dy) = self.dir.delta();
        self.from.offset(2 * dx, 2 * dy)
    }

    pub fn mirrored(&self) -> Self {
        Jump {
            from: Position::new(-self.from.x, self.from.y),
            dir: self.dir.mirrored(),
        }
    }

    /// The reversed move that undoes this jump.
    pub fn reversed(&self) -> Move {
        Move::new(vec![self.from, self.over()], Some(self.to()))
    }
}

impl fmt::Display for Jump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.from.x, self.from.y, self.dir.ascii())
    }
}

/// A reversed-game move, or more generally a tuple move: pegs are added on
/// every gain cell and one is removed from the loss cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub gains: Vec<Position>,
    pub loss: Option<Position>,
}

impl Move {
    pub fn new(gains: Vec<Position>, loss: Option<Position>) -> Self {
        Move { gains, loss }
    }

    /// If this is a reversed solitaire jump `(p1, p2 <- p3)`, the forward
    /// jump it undoes.
    pub fn as_jump(&self) -> Option<Jump> {
        let loss = self.loss?;
        let [p1, p2] = self.gains[..] else { return None };
        let dir = Direction::from_delta(p2.x - p1.x, p2.y - p1.y)?;
        (loss.x - p2.x == p2.x - p1.x && loss.y - p2.y == p2.y - p1.y).then_some(Jump { from: p1, dir })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("column {column} has {count} entries equal to -1")]
    FundamentalAssumptionViolation { column: usize, count: usize },
    #[error("column {column}: position {position} is not on the board")]
    OffBoard { column: usize, position: Position },
    #[error("column {column} has no gain cell")]
    NoGain { column: usize },
    #[error("column {column} lists gain {position} twice")]
    DuplicateGain { column: usize, position: Position },
    #[error("column {column} has entry {value} outside {{-1, 0, 1}}")]
    BadEntry { column: usize, value: i32 },
}

/// Which side of a move failed the strict occupancy test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccupancyFailure {
    /// A gain cell already holds a peg.
    Gain,
    /// The loss cell does not hold exactly one peg.
    Loss,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("occupancy violation at {position} ({kind:?})")]
pub struct OccupancyViolation {
    pub position: Position,
    pub kind: OccupancyFailure,
}

/// One column of `A` in index form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    pub gains: Vec<usize>,
    pub loss: Option<usize>,
}

impl Column {
    pub fn entries(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.gains.iter().map(|&i| (i, 1)).chain(self.loss.map(|i| (i, -1)))
    }

    pub fn coeff(&self, row: usize) -> i32 {
        let g = self.gains.iter().filter(|&&i| i == row).count() as i32;
        g - i32::from(self.loss == Some(row))
    }
}

/// The `n × m` move matrix over a board, stored by columns and by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveMatrix {
    moves: Vec<Move>,
    columns: Vec<Column>,
    rows: Vec<Vec<(usize, i32)>>,
}

impl MoveMatrix {
    fn from_moves(board: &Board, moves: Vec<Move>) -> Result<Self, MoveError> {
        let mut columns = Vec::with_capacity(moves.len());
        for (j, m) in moves.iter().enumerate() {
            if m.gains.is_empty() {
                return Err(MoveError::NoGain { column: j });
            }
            let lookup = |p: Position| board.index_of(p).ok_or(MoveError::OffBoard { column: j, position: p });
            let mut gains = Vec::with_capacity(m.gains.len());
            for &g in &m.gains {
                let i = lookup(g)?;
                if gains.contains(&i) {
                    return Err(MoveError::DuplicateGain { column: j, position: g });
                }
                gains.push(i);
            }
            let loss = m.loss.map(lookup).transpose()?;
            if let Some(l) = loss {
                if gains.contains(&l) {
                    // the tuple would place its removed peg twice
                    return Err(MoveError::FundamentalAssumptionViolation { column: j, count: 2 });
                }
            }
            columns.push(Column { gains, loss });
        }
        let mut rows = vec![Vec::new(); board.len()];
        for (j, c) in columns.iter().enumerate() {
            for (i, a) in c.entries() {
                rows[i].push((j, a));
            }
        }
        Ok(MoveMatrix { moves, columns, rows })
    }

    /// Build from raw signed columns `(row, entry)`; used to check the
    /// fundamental assumption on arbitrary matrices.
    pub fn from_signed_columns(board: &Board, cols: &[Vec<(usize, i32)>]) -> Result<Self, MoveError> {
        let mut moves = Vec::with_capacity(cols.len());
        for (j, col) in cols.iter().enumerate() {
            let mut gains = Vec::new();
            let mut losses = Vec::new();
            for &(i, a) in col {
                if i >= board.len() {
                    return Err(MoveError::BadEntry { column: j, value: a });
                }
                match a {
                    1 => gains.push(board.cell(i)),
                    -1 => losses.push(board.cell(i)),
                    0 => {}
                    v => return Err(MoveError::BadEntry { column: j, value: v }),
                }
            }
            if losses.len() > 1 {
                return Err(MoveError::FundamentalAssumptionViolation {
                    column: j,
                    count: losses.len(),
                });
            }
            moves.push(Move::new(gains, losses.pop()));
        }
        MoveMatrix::from_moves(board, moves)
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn get(&self, j: usize) -> &Move {
        &self.moves[j]
    }

    pub fn column(&self, j: usize) -> &Column {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Nonzero entries of row `i` as `(column, entry)`.
    pub fn row(&self, i: usize) -> &[(usize, i32)] {
        &self.rows[i]
    }

    pub fn position_of(&self, m: &Move) -> Option<usize> {
        self.moves.iter().position(|x| x == m)
    }

    /// `A x` for a multiplicity vector.
    pub fn apply_vector(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rows.len()];
        for (j, &k) in x.iter().enumerate() {
            if k != 0 {
                for (i, a) in self.columns[j].entries() {
                    out[i] += a as i64 * k;
                }
            }
        }
        out
    }

    /// Number of `-1` entries per column; never more than one.
    pub fn max_negative_entries(&self) -> usize {
        self.columns
            .iter()
            .map(|c| c.entries().filter(|&(_, a)| a < 0).count())
            .max()
            .unwrap_or(0)
    }

    /// Apply column `j` with no occupancy checks.
    pub fn apply_relaxed_index(&self, counts: &mut [i32], j: usize) {
        for (i, a) in self.columns[j].entries() {
            counts[i] += a;
        }
    }

    pub fn strict_applicable(&self, counts: &[i32], j: usize) -> bool {
        let c = &self.columns[j];
        c.gains.iter().all(|&i| counts[i] == 0) && c.loss.is_none_or(|l| counts[l] == 1)
    }
}

/// Every reversed solitaire jump `(p1, p2 <- p3)` with all three cells on the
/// board. Columns are sorted by loss cell, then by the forward direction in
/// the order `→ ← ↓ ↑`.
pub fn enumerate_jump_moves(board: &Board) -> MoveMatrix {
    let mut moves = Vec::new();
    for &p3 in board.cells() {
        for d in Direction::ALL {
            let (dx, dy) = d.delta();
            let p2 = p3.offset(-dx, -dy);
            let p1 = p3.offset(-2 * dx, -2 * dy);
            if board.contains(p1) && board.contains(p2) {
                moves.push(Move::new(vec![p1, p2], Some(p3)));
            }
        }
    }
    MoveMatrix::from_moves(board, moves).expect("jump moves are well formed")
}

/// Moves from position tuples; the last entry of each tuple is the loss.
pub fn make_custom_moveset(board: &Board, tuples: &[Vec<Position>]) -> Result<MoveMatrix, MoveError> {
    let mut moves = Vec::with_capacity(tuples.len());
    for (j, t) in tuples.iter().enumerate() {
        let Some((&loss, gains)) = t.split_last() else {
            return Err(MoveError::NoGain { column: j });
        };
        moves.push(Move::new(gains.to_vec(), Some(loss)));
    }
    MoveMatrix::from_moves(board, moves)
}

/// Apply a move ignoring occupancy.
pub fn apply_relaxed(board: &Board, config: &Configuration, mv: &Move) -> Result<Configuration, MoveError> {
    let mut out = config.clone();
    let counts = out.counts_mut();
    for &g in &mv.gains {
        let i = board
            .index_of(g)
            .ok_or(MoveError::OffBoard { column: 0, position: g })?;
        counts[i] += 1;
    }
    if let Some(l) = mv.loss {
        let i = board
            .index_of(l)
            .ok_or(MoveError::OffBoard { column: 0, position: l })?;
        counts[i] -= 1;
    }
    Ok(out)
}

/// Apply a move in the strict game: every gain cell must be empty and the
/// loss cell must hold exactly one peg.
pub fn apply_strict(board: &Board, config: &Configuration, mv: &Move) -> Result<Configuration, OccupancyViolation> {
    let count = |p: Position| config.at(board, p);
    if let Some(l) = mv.loss {
        if count(l) != Some(1) {
            return Err(OccupancyViolation {
                position: l,
                kind: OccupancyFailure::Loss,
            });
        }
    }
    for &g in &mv.gains {
        if count(g) != Some(0) {
            return Err(OccupancyViolation {
                position: g,
                kind: OccupancyFailure::Gain,
            });
        }
    }
    Ok(apply_relaxed(board, config, mv).expect("cells checked above"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{make_board, ShapeSpec};

    fn line(n: i32) -> Board {
        Board::rectangle(0, n - 1, 0, 0, Position::new(n - 1, 0)).unwrap()
    }

    fn p(x: i32, y: i32) -> Position {
        Position::new(x, y)
    }

    #[test]
    fn jump_counts() {
        assert_eq!(enumerate_jump_moves(&line(3)).len(), 2);
        let b = Board::rectangle(0, 2, 0, 2, p(1, 1)).unwrap();
        assert_eq!(enumerate_jump_moves(&b).len(), 12);
    }

    #[test]
    fn eleven_square_box_count() {
        let b = make_board(&ShapeSpec::square(11, 18)).unwrap();
        let (w, h) = (47usize, 47usize);
        assert_eq!(b.len(), w * h);
        let m = enumerate_jump_moves(&b);
        assert_eq!(m.len(), 2 * h * (w - 2) + 2 * w * (h - 2));
        assert_eq!(m.max_negative_entries(), 1);
    }

    #[test]
    fn column_order_is_loss_then_direction() {
        let b = line(5);
        let m = enumerate_jump_moves(&b);
        let losses: Vec<_> = m.moves().iter().map(|mv| mv.loss.unwrap()).collect();
        let mut sorted = losses.clone();
        sorted.sort();
        assert_eq!(losses, sorted);
        // loss (2,0): right-pointing jump first, then left
        let at2: Vec<_> = m.moves().iter().filter(|mv| mv.loss == Some(p(2, 0))).collect();
        assert_eq!(at2[0].gains, vec![p(0, 0), p(1, 0)]);
        assert_eq!(at2[1].gains, vec![p(4, 0), p(3, 0)]);
    }

    #[test]
    fn relaxed_application() {
        let b = line(3);
        let mv = Move::new(vec![p(0, 0), p(1, 0)], Some(p(2, 0)));
        for (start, end) in [
            (vec![0, 0, 1], vec![1, 1, 0]),
            (vec![0, 0, 0], vec![1, 1, -1]),
            (vec![5, -2, 3], vec![6, -1, 2]),
        ] {
            let c = Configuration::from_counts(&b, start).unwrap();
            assert_eq!(apply_relaxed(&b, &c, &mv).unwrap().counts(), &end[..]);
        }
    }

    #[test]
    fn strict_application() {
        let b = line(3);
        let mv = Move::new(vec![p(0, 0), p(1, 0)], Some(p(2, 0)));
        let ok = Configuration::from_counts(&b, vec![0, 0, 1]).unwrap();
        assert_eq!(apply_strict(&b, &ok, &mv).unwrap().counts(), &[1, 1, 0]);
        let busy = Configuration::from_counts(&b, vec![1, 0, 1]).unwrap();
        assert_eq!(
            apply_strict(&b, &busy, &mv),
            Err(OccupancyViolation {
                position: p(0, 0),
                kind: OccupancyFailure::Gain
            })
        );
        let none = Configuration::empty(&b);
        assert_eq!(
            apply_strict(&b, &none, &mv),
            Err(OccupancyViolation {
                position: p(2, 0),
                kind: OccupancyFailure::Loss
            })
        );
    }

    #[test]
    fn custom_moves() {
        let b = Board::rectangle(0, 4, 0, 2, p(2, 1)).unwrap();
        let jumps = enumerate_jump_moves(&b);
        let tuples: Vec<Vec<Position>> = jumps
            .moves()
            .iter()
            .map(|m| {
                let mut t = m.gains.clone();
                t.push(m.loss.unwrap());
                t
            })
            .collect();
        assert_eq!(make_custom_moveset(&b, &tuples).unwrap(), jumps);

        let peb = make_custom_moveset(&b, &[vec![p(0, 0), p(1, 0)]]).unwrap();
        let col = peb.column(0);
        assert_eq!(col.coeff(b.index_of(p(0, 0)).unwrap()), 1);
        assert_eq!(col.coeff(b.index_of(p(1, 0)).unwrap()), -1);

        assert!(matches!(
            make_custom_moveset(&b, &[vec![p(0, 0), p(1, 0), p(1, 0)]]),
            Err(MoveError::FundamentalAssumptionViolation { .. })
        ));
        assert!(matches!(
            MoveMatrix::from_signed_columns(&b, &[vec![(0, 1), (1, -1), (2, -1)]]),
            Err(MoveError::FundamentalAssumptionViolation { column: 0, count: 2 })
        ));
    }

    #[test]
    fn jump_roundtrip() {
        let j = Jump::new(-7, -2, Direction::Right);
        let m = j.reversed();
        assert_eq!(m.gains, vec![p(-7, -2), p(-6, -2)]);
        assert_eq!(m.loss, Some(p(-5, -2)));
        assert_eq!(m.as_jump(), Some(j));
        assert_eq!(j.mirrored(), Jump::new(7, -2, Direction::Left));
        assert_eq!(
            Jump::new(-8, -4, Direction::Up).mirrored(),
            Jump::new(8, -4, Direction::Up)
        );
    }
}
