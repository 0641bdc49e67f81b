//! Board geometry: positions, finite boards with a desert, configurations and
//! the desert shapes used by the army experiments.
//!
//! Coordinates put the origin at the desert center with `y` growing upward.
//! The infinite board of the army problem is truncated to the bounding box of
//! the desert grown by a margin.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A cell of the grid. Ordered by row first, then column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

impl Position {
    pub const fn new(x: i32, y: i32) -> Self {
        Position { x, y }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Position::new(self.x + dx, self.y + dy)
    }

    pub fn reflect(self, axis: Axis) -> Self {
        match axis {
            Axis::Vertical => Position::new(-self.x, self.y),
            Axis::Horizontal => Position::new(self.x, -self.y),
        }
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[i32; 2]> for Position {
    fn from([x, y]: [i32; 2]) -> Self {
        Position::new(x, y)
    }
}

impl From<Position> for [i32; 2] {
    fn from(p: Position) -> Self {
        [p.x, p.y]
    }
}

impl From<(i32, i32)> for Position {
    fn from((x, y): (i32, i32)) -> Self {
        Position::new(x, y)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Reflection axis. `Vertical` maps `(x, y)` to `(-x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Vertical,
    Horizontal,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("desert cell {0} is not a board cell")]
    DesertOffBoard(Position),
    #[error("target {0} is not a board cell")]
    TargetOffBoard(Position),
    #[error("duplicate cell {0}")]
    DuplicateCell(Position),
    #[error("shape side must be at least 1")]
    ZeroSide,
    #[error("rhombus deserts need an odd side, got {0}")]
    EvenRhombus(u32),
    #[error("margin {margin} leaves no cell outside the desert")]
    EmptyRegion { margin: u32 },
    #[error("board is not closed under reflection: {0} has no mirror cell")]
    NotSymmetric(Position),
    #[error("configuration has {got} entries but the board has {expected} cells")]
    LengthMismatch { expected: usize, got: usize },
    #[error("position {0} is not on the board")]
    OffBoard(Position),
}

/// A finite board: ordered cells, the desert subset and the target cell.
/// Every cell that is not desert belongs to the region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    cells: Vec<Position>,
    desert: Vec<bool>,
    target: Position,
    index: HashMap<Position, usize>,
}

impl Board {
    pub fn new(
        cells: impl IntoIterator<Item = Position>,
        desert: impl IntoIterator<Item = Position>,
        target: Position,
    ) -> Result<Self, BoardError> {
        let mut set = BTreeSet::new();
        for c in cells {
            if !set.insert(c) {
                return Err(BoardError::DuplicateCell(c));
            }
        }
        let cells: Vec<Position> = set.into_iter().collect();
        let index: HashMap<Position, usize> = cells.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut flags = vec![false; cells.len()];
        for d in desert {
            let i = *index.get(&d).ok_or(BoardError::DesertOffBoard(d))?;
            flags[i] = true;
        }
        if !index.contains_key(&target) {
            return Err(BoardError::TargetOffBoard(target));
        }
        Ok(Board {
            cells,
            desert: flags,
            target,
            index,
        })
    }

    /// Full rectangle `[x0, x1] × [y0, y1]` with an empty desert.
    pub fn rectangle(x0: i32, x1: i32, y0: i32, y1: i32, target: Position) -> Result<Self, BoardError> {
        let cells = (y0..=y1).flat_map(|y| (x0..=x1).map(move |x| Position::new(x, y)));
        Board::new(cells, [], target)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Position] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> Position {
        self.cells[i]
    }

    pub fn index_of(&self, p: Position) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn contains(&self, p: Position) -> bool {
        self.index.contains_key(&p)
    }

    pub fn target(&self) -> Position {
        self.target
    }

    pub fn target_index(&self) -> usize {
        self.index[&self.target]
    }

    pub fn is_desert(&self, i: usize) -> bool {
        self.desert[i]
    }

    pub fn is_desert_at(&self, p: Position) -> bool {
        self.index_of(p).is_some_and(|i| self.desert[i])
    }

    pub fn desert_cells(&self) -> impl Iterator<Item = Position> + '_ {
        self.cells.iter().zip(&self.desert).filter(|(_, &d)| d).map(|(&p, _)| p)
    }

    pub fn region_cells(&self) -> impl Iterator<Item = Position> + '_ {
        self.cells
            .iter()
            .zip(&self.desert)
            .filter(|(_, &d)| !d)
            .map(|(&p, _)| p)
    }

    pub fn desert_len(&self) -> usize {
        self.desert.iter().filter(|&&d| d).count()
    }

    /// Same cells and desert, another target.
    pub fn with_target(&self, target: Position) -> Result<Self, BoardError> {
        if !self.contains(target) {
            return Err(BoardError::TargetOffBoard(target));
        }
        Ok(Board { target, ..self.clone() })
    }

    /// Same cells and target, another desert.
    pub fn with_desert(&self, desert: impl IntoIterator<Item = Position>) -> Result<Self, BoardError> {
        Board::new(self.cells.iter().copied(), desert, self.target)
    }

    /// Cells of the desert closest to its centroid. A single cell for odd
    /// sides, four for even squares.
    pub fn desert_centers(&self) -> Vec<Position> {
        let desert: Vec<Position> = self.desert_cells().collect();
        if desert.is_empty() {
            return Vec::new();
        }
        let n = desert.len() as i64;
        let (sx, sy) = desert
            .iter()
            .fold((0i64, 0i64), |(a, b), p| (a + p.x as i64, b + p.y as i64));
        // distances compared in units of 1/n to stay integral
        let dist = |p: &Position| {
            let dx = p.x as i64 * n - sx;
            let dy = p.y as i64 * n - sy;
            dx * dx + dy * dy
        };
        let best = desert.iter().map(dist).min().unwrap();
        desert.into_iter().filter(|p| dist(p) == best).collect()
    }

    pub fn is_symmetric(&self, axis: Axis) -> bool {
        self.cells.iter().all(|&p| {
            self.index_of(p.reflect(axis))
                .is_some_and(|j| self.desert[j] == self.desert[self.index[&p]])
        })
    }

    /// Index permutation for a reflection, if the board is closed under it.
    pub fn mirror_map(&self, axis: Axis) -> Result<Vec<usize>, BoardError> {
        self.cells
            .iter()
            .map(|&p| self.index_of(p.reflect(axis)).ok_or(BoardError::NotSymmetric(p)))
            .collect()
    }

    pub fn to_file(&self) -> BoardFile {
        BoardFile {
            cells: self.cells.clone(),
            desert: self.desert_cells().collect(),
            target: self.target,
        }
    }

    pub fn from_file(file: &BoardFile) -> Result<Self, BoardError> {
        Board::new(file.cells.iter().copied(), file.desert.iter().copied(), file.target)
    }
}

/// JSON form of a board. Cell lists are sorted by `(y, x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardFile {
    pub cells: Vec<Position>,
    pub desert: Vec<Position>,
    pub target: Position,
}

/// Pegs per board cell, indexed like [`Board::cells`]. Strict configurations
/// hold 0 or 1 everywhere; relaxed ones any integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    counts: Vec<i32>,
}

impl Configuration {
    pub fn empty(board: &Board) -> Self {
        Configuration {
            counts: vec![0; board.len()],
        }
    }

    pub fn from_counts(board: &Board, counts: Vec<i32>) -> Result<Self, BoardError> {
        if counts.len() != board.len() {
            return Err(BoardError::LengthMismatch {
                expected: board.len(),
                got: counts.len(),
            });
        }
        Ok(Configuration { counts })
    }

    pub fn from_pegs(board: &Board, pegs: impl IntoIterator<Item = Position>) -> Result<Self, BoardError> {
        let mut c = Configuration::empty(board);
        for p in pegs {
            let i = board.index_of(p).ok_or(BoardError::OffBoard(p))?;
            c.counts[i] += 1;
        }
        Ok(c)
    }

    /// The reversed-game start: one peg on the target.
    pub fn single_peg_at_target(board: &Board) -> Self {
        let mut c = Configuration::empty(board);
        c.counts[board.target_index()] = 1;
        c
    }

    pub fn counts(&self) -> &[i32] {
        &self.counts
    }

    pub fn counts_mut(&mut self) -> &mut [i32] {
        &mut self.counts
    }

    pub fn get(&self, i: usize) -> i32 {
        self.counts[i]
    }

    pub fn at(&self, board: &Board, p: Position) -> Option<i32> {
        board.index_of(p).map(|i| self.counts[i])
    }

    pub fn total(&self) -> i64 {
        self.counts.iter().map(|&c| c as i64).sum()
    }

    pub fn is_strict(&self) -> bool {
        self.counts.iter().all(|&c| c == 0 || c == 1)
    }

    pub fn pegs<'a>(&'a self, board: &'a Board) -> impl Iterator<Item = Position> + 'a {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| board.cell(i))
    }

    /// True when no desert cell holds a peg and the region holds at most one
    /// peg per cell.
    pub fn respects_caps(&self, board: &Board) -> bool {
        self.counts.iter().enumerate().all(|(i, &c)| {
            let cap = if board.is_desert(i) { 0 } else { 1 };
            (0..=cap).contains(&c)
        })
    }
}

/// Reflect a configuration across an axis through the origin.
pub fn mirror(board: &Board, config: &Configuration, axis: Axis) -> Result<Configuration, BoardError> {
    let map = board.mirror_map(axis)?;
    let mut out = Configuration::empty(board);
    for (i, &c) in config.counts.iter().enumerate() {
        out.counts[map[i]] = c;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Square,
    Rhombus,
}

/// What the board looks like outside the bounding box of the desert.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ambient {
    /// Every cell of the box.
    FullPlane,
    /// Only cells on or below the top row of the desert.
    HalfPlane,
    /// Only cells with `x + y` not above the desert's upper-right edge.
    DiagonalHalfPlane,
    /// Desert plus the union of three open half-planes tangent to it: left,
    /// right and below for squares; the three diagonal sides other than the
    /// upper-left one for rhombi.
    ThreeTangentHalfPlanes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub side: u32,
    pub ambient: Ambient,
    pub margin: u32,
}

impl ShapeSpec {
    pub fn square(side: u32, margin: u32) -> Self {
        ShapeSpec {
            kind: ShapeKind::Square,
            side,
            ambient: Ambient::FullPlane,
            margin,
        }
    }

    pub fn rhombus(side: u32, margin: u32) -> Self {
        ShapeSpec {
            kind: ShapeKind::Rhombus,
            side,
            ambient: Ambient::FullPlane,
            margin,
        }
    }

    pub fn with_ambient(self, ambient: Ambient) -> Self {
        ShapeSpec { ambient, ..self }
    }

    fn in_desert(&self, p: Position) -> bool {
        let s = self.side as i32;
        match self.kind {
            ShapeKind::Square if s % 2 == 1 => p.x.abs() <= s / 2 && p.y.abs() <= s / 2,
            ShapeKind::Square => (-s / 2..s / 2).contains(&p.x) && (-s / 2..s / 2).contains(&p.y),
            ShapeKind::Rhombus => p.x.abs() + p.y.abs() <= s / 2,
        }
    }

    /// Inclusive `(low, high)` coordinate range of the desert on both axes.
    fn desert_span(&self) -> (i32, i32) {
        let s = self.side as i32;
        match self.kind {
            ShapeKind::Square if s % 2 == 0 => (-s / 2, s / 2 - 1),
            _ => (-s / 2, s / 2),
        }
    }

    fn in_ambient(&self, p: Position) -> bool {
        let (lo, hi) = self.desert_span();
        match (self.ambient, self.kind) {
            (Ambient::FullPlane, _) => true,
            (Ambient::HalfPlane, _) => p.y <= hi,
            (Ambient::DiagonalHalfPlane, ShapeKind::Square) => p.x + p.y <= 2 * hi,
            (Ambient::DiagonalHalfPlane, ShapeKind::Rhombus) => p.x + p.y <= hi,
            (Ambient::ThreeTangentHalfPlanes, ShapeKind::Square) => {
                self.in_desert(p) || p.x < lo || p.x > hi || p.y < lo
            }
            (Ambient::ThreeTangentHalfPlanes, ShapeKind::Rhombus) => {
                self.in_desert(p) || p.x + p.y > hi || p.x - p.y > hi || -p.x - p.y > hi
            }
        }
    }
}

/// Build the truncated board for a desert shape. The target is the desert
/// center; for even squares it is `(0, 0)`, one of the four centers (see
/// [`Board::desert_centers`]).
pub fn make_board(spec: &ShapeSpec) -> Result<Board, BoardError> {
    if spec.side == 0 {
        return Err(BoardError::ZeroSide);
    }
    if spec.kind == ShapeKind::Rhombus && spec.side.is_multiple_of(2) {
        return Err(BoardError::EvenRhombus(spec.side));
    }
    let (lo, hi) = spec.desert_span();
    let m = spec.margin as i32;
    let mut cells = Vec::new();
    let mut desert = Vec::new();
    for y in lo - m..=hi + m {
        for x in lo - m..=hi + m {
            let p = Position::new(x, y);
            if spec.in_desert(p) {
                cells.push(p);
                desert.push(p);
            } else if spec.in_ambient(p) {
                cells.push(p);
            }
        }
    }
    if cells.len() == desert.len() {
        return Err(BoardError::EmptyRegion { margin: spec.margin });
    }
    Board::new(cells, desert, Position::new(0, 0))
}

/// Conway's setting: the region is the lower half-plane `y <= 0`, the desert
/// everything above it, and the target sits `distance` rows into the desert.
/// The box spans `|x| <= distance + margin` and `1 - margin <= y <= distance + 1`.
pub fn half_plane_desert(distance: u32, margin: u32) -> Result<Board, BoardError> {
    if margin == 0 {
        return Err(BoardError::EmptyRegion { margin });
    }
    let d = distance as i32;
    let m = margin as i32;
    let w = d + m;
    let mut cells = Vec::new();
    let mut desert = Vec::new();
    for y in 1 - m..=d + 1 {
        for x in -w..=w {
            let p = Position::new(x, y);
            cells.push(p);
            if y >= 1 {
                desert.push(p);
            }
        }
    }
    Board::new(cells, desert, Position::new(0, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_seven_desert() {
        let b = make_board(&ShapeSpec::square(7, 9)).unwrap();
        assert_eq!(b.desert_len(), 49);
        assert!(b.desert_cells().all(|p| p.x.abs() <= 3 && p.y.abs() <= 3));
        assert_eq!(b.target(), Position::new(0, 0));
        assert_eq!(b.len(), 25 * 25);
    }

    #[test]
    fn smallest_square() {
        let b = make_board(&ShapeSpec::square(1, 1)).unwrap();
        assert_eq!(b.desert_cells().collect::<Vec<_>>(), vec![Position::new(0, 0)]);
        assert_eq!(b.region_cells().count(), 8);
    }

    #[test]
    fn rhombus_fifteen() {
        let b = make_board(&ShapeSpec::rhombus(15, 12)).unwrap();
        let expected = (-7..=7i32)
            .flat_map(|y| (-7..=7i32).map(move |x| (x, y)))
            .filter(|(x, y)| x.abs() + y.abs() <= 7)
            .count();
        assert_eq!(expected, 113);
        assert_eq!(b.desert_len(), 113);
    }

    #[test]
    fn even_square_has_four_centers() {
        let b = make_board(&ShapeSpec::square(12, 2)).unwrap();
        assert_eq!(b.desert_len(), 144);
        let mut c = b.desert_centers();
        c.sort();
        assert_eq!(
            c,
            vec![
                Position::new(-1, -1),
                Position::new(0, -1),
                Position::new(-1, 0),
                Position::new(0, 0)
            ]
        );
        assert!(c.contains(&b.target()));
    }

    #[test]
    fn margin_zero_rejected() {
        assert_eq!(
            make_board(&ShapeSpec::square(5, 0)),
            Err(BoardError::EmptyRegion { margin: 0 })
        );
        assert_eq!(make_board(&ShapeSpec::rhombus(4, 3)), Err(BoardError::EvenRhombus(4)));
    }

    #[test]
    fn half_plane_square_stops_at_desert_top() {
        let b = make_board(&ShapeSpec::square(11, 4).with_ambient(Ambient::HalfPlane)).unwrap();
        assert!(b.cells().iter().all(|p| p.y <= 5));
        assert_eq!(b.desert_len(), 121);
        let three = make_board(&ShapeSpec::square(11, 4).with_ambient(Ambient::ThreeTangentHalfPlanes)).unwrap();
        assert!(!three.contains(Position::new(0, 6)));
        assert!(three.contains(Position::new(6, 6)));
        assert!(three.contains(Position::new(0, -6)));
    }

    #[test]
    fn mirror_moves_pegs() {
        let b = make_board(&ShapeSpec::square(11, 9)).unwrap();
        let c = Configuration::from_pegs(&b, [Position::new(-7, -2)]).unwrap();
        let m = mirror(&b, &c, Axis::Vertical).unwrap();
        assert_eq!(m.pegs(&b).collect::<Vec<_>>(), vec![Position::new(7, -2)]);
        let e = Configuration::empty(&b);
        assert_eq!(mirror(&b, &e, Axis::Vertical).unwrap(), e);
        assert_eq!(mirror(&b, &m, Axis::Vertical).unwrap(), c);
    }

    #[test]
    fn mirror_requires_symmetric_board() {
        let b = Board::rectangle(0, 2, 0, 0, Position::new(0, 0)).unwrap();
        let c = Configuration::empty(&b);
        assert!(matches!(
            mirror(&b, &c, Axis::Vertical),
            Err(BoardError::NotSymmetric(_))
        ));
    }

    #[test]
    fn board_json_roundtrip() {
        let b = make_board(&ShapeSpec::square(3, 1)).unwrap();
        let s = serde_json::to_string(&b.to_file()).unwrap();
        assert!(s.starts_with("{\"cells\":[[-2,-2],[-1,-2]"));
        let back = Board::from_file(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn conway_board_layout() {
        let b = half_plane_desert(4, 3).unwrap();
        assert_eq!(b.target(), Position::new(0, 4));
        assert!(b.region_cells().all(|p| p.y <= 0));
        assert!(b.desert_cells().all(|p| p.y >= 1));
    }
}
