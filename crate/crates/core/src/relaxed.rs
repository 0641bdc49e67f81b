//! The relaxed army problem as an integer program:
//! find integer `x >= 0` with `0 <= A x + b <= c`.
//!
//! `b` is the start of the reversed game and `c` is 0 on the desert and 1 on
//! the region. Instances can be written in LP format for an external solver
//! and solutions read back from a plain `x_<j> <value>` listing.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, Configuration, Position};
use crate::moves::MoveMatrix;

/// Default per-variable multiplicity cap.
pub const DEFAULT_CAP: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    FeasibilityOnly,
    MinimizeTotalMoves,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelaxedError {
    #[error("start configuration is not strict")]
    StartNotStrict,
    #[error("start configuration has {got} cells, board has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("solution has {got} entries, instance has {expected} moves")]
    WrongLength { expected: usize, got: usize },
    #[error("row {row} at {position}: count {value} outside [0, {cap}]")]
    ConstraintViolation {
        row: usize,
        position: Position,
        value: i64,
        cap: i32,
    },
    #[error("x_{column} = {value} exceeds its cap {cap}")]
    CapExceeded { column: usize, value: u32, cap: u32 },
}

/// A relaxed army instance over a fixed board and move set.
#[derive(Clone, Debug)]
pub struct IlpInstance {
    board: Board,
    moves: MoveMatrix,
    b: Vec<i32>,
    c: Vec<i32>,
    objective: Objective,
    caps: Vec<u32>,
}

impl IlpInstance {
    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn moves(&self) -> &MoveMatrix {
        &self.moves
    }

    pub fn b(&self) -> &[i32] {
        &self.b
    }

    pub fn c(&self) -> &[i32] {
        &self.c
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn n_positions(&self) -> usize {
        self.b.len()
    }

    pub fn n_moves(&self) -> usize {
        self.moves.len()
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.caps = vec![cap; self.moves.len()];
        self
    }

    pub fn with_caps(mut self, caps: Vec<u32>) -> Self {
        assert_eq!(caps.len(), self.moves.len());
        self.caps = caps;
        self
    }

    pub fn start(&self) -> Configuration {
        Configuration::from_counts(&self.board, self.b.clone()).expect("lengths match")
    }

    /// `A x + b` for a multiplicity vector.
    pub fn final_counts(&self, x: &[u32]) -> Vec<i64> {
        let x: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        let mut out = self.moves.apply_vector(&x);
        for (o, &b) in out.iter_mut().zip(&self.b) {
            *o += b as i64;
        }
        out
    }

    /// Check `0 <= A x + b <= c`, reporting the first violated row.
    pub fn check(&self, x: &[u32]) -> Result<(), RelaxedError> {
        if x.len() != self.moves.len() {
            return Err(RelaxedError::WrongLength {
                expected: self.moves.len(),
                got: x.len(),
            });
        }
        for (i, v) in self.final_counts(x).into_iter().enumerate() {
            if v < 0 || v > self.c[i] as i64 {
                return Err(RelaxedError::ConstraintViolation {
                    row: i,
                    position: self.board.cell(i),
                    value: v,
                    cap: self.c[i],
                });
            }
        }
        Ok(())
    }
}

/// Assemble the program for a board, move set and strict start. `c` is 0 on
/// desert cells and 1 elsewhere.
pub fn build_ilp(board: &Board, moves: &MoveMatrix, start: &Configuration) -> Result<IlpInstance, RelaxedError> {
    if start.counts().len() != board.len() {
        return Err(RelaxedError::LengthMismatch {
            expected: board.len(),
            got: start.counts().len(),
        });
    }
    if !start.is_strict() {
        return Err(RelaxedError::StartNotStrict);
    }
    let c = (0..board.len()).map(|i| i32::from(!board.is_desert(i))).collect();
    Ok(IlpInstance {
        board: board.clone(),
        moves: moves.clone(),
        b: start.counts().to_vec(),
        c,
        objective: Objective::FeasibilityOnly,
        caps: vec![DEFAULT_CAP; moves.len()],
    })
}

/// A nonnegative integer multiplicity vector satisfying `0 <= A x + b <= c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelaxedSolution {
    x: Vec<u32>,
}

impl RelaxedSolution {
    /// Validates the constraints before accepting `x`. Caps are not enforced
    /// here; see [`RelaxedSolution::check_caps`].
    pub fn new(ilp: &IlpInstance, x: Vec<u32>) -> Result<Self, RelaxedError> {
        ilp.check(&x)?;
        Ok(RelaxedSolution { x })
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    /// `|x|`, the number of moves.
    pub fn total(&self) -> u64 {
        self.x.iter().map(|&v| v as u64).sum()
    }

    pub fn check_caps(&self, ilp: &IlpInstance) -> Result<(), RelaxedError> {
        for (j, (&v, &cap)) in self.x.iter().zip(ilp.caps()).enumerate() {
            if v > cap {
                return Err(RelaxedError::CapExceeded {
                    column: j,
                    value: v,
                    cap,
                });
            }
        }
        Ok(())
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.x
    }
}

/// Feasibility by enumerating `0 <= x_j <= cap_j` column by column, cutting
/// branches where some row can no longer end inside `[0, c]`. Exponential;
/// intended as an independent check on small instances. Returns the first
/// solution in lexicographic order of `x`.
pub fn exhaustive_feasible(ilp: &IlpInstance) -> Option<RelaxedSolution> {
    let m = ilp.n_moves();
    let n = ilp.n_positions();
    // reach[k][i]: extreme contributions of columns k.. to row i
    let mut lo = vec![vec![0i64; n]; m + 1];
    let mut hi = vec![vec![0i64; n]; m + 1];
    for k in (0..m).rev() {
        lo[k] = lo[k + 1].clone();
        hi[k] = hi[k + 1].clone();
        let cap = ilp.caps()[k] as i64;
        for (i, a) in ilp.moves().column(k).entries() {
            if a < 0 {
                lo[k][i] += a as i64 * cap;
            } else {
                hi[k][i] += a as i64 * cap;
            }
        }
    }
    fn go(ilp: &IlpInstance, k: usize, v: &mut [i64], x: &mut Vec<u32>, lo: &[Vec<i64>], hi: &[Vec<i64>]) -> bool {
        let c = ilp.c();
        if (0..v.len()).any(|i| v[i] + lo[k][i] > c[i] as i64 || v[i] + hi[k][i] < 0) {
            return false;
        }
        if k == x.len() {
            return true;
        }
        let entries: Vec<(usize, i32)> = ilp.moves().column(k).entries().collect();
        for mult in 0..=ilp.caps()[k] {
            x[k] = mult;
            if go(ilp, k + 1, v, x, lo, hi) {
                return true;
            }
            for &(i, a) in &entries {
                v[i] += a as i64;
            }
        }
        for &(i, a) in &entries {
            v[i] -= a as i64 * (ilp.caps()[k] as i64 + 1);
        }
        x[k] = 0;
        false
    }
    let mut v: Vec<i64> = ilp.b().iter().map(|&b| b as i64).collect();
    let mut x = vec![0u32; m];
    go(ilp, 0, &mut v, &mut x, &lo, &hi).then_some(RelaxedSolution { x })
}

/// JSON form of a relaxed solution: the board plus nonzero multiplicities
/// keyed by move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxedFile {
    pub board: crate::board::BoardFile,
    pub start: Vec<Position>,
    pub total: u64,
    pub moves: Vec<RelaxedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxedEntry {
    pub column: usize,
    pub gains: Vec<Position>,
    pub loss: Option<Position>,
    pub count: u32,
}

impl RelaxedFile {
    pub fn from_solution(ilp: &IlpInstance, sol: &RelaxedSolution) -> Self {
        let moves = sol
            .x()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| {
                let m = ilp.moves().get(j);
                RelaxedEntry {
                    column: j,
                    gains: m.gains.clone(),
                    loss: m.loss,
                    count: k,
                }
            })
            .collect();
        RelaxedFile {
            board: ilp.board().to_file(),
            start: ilp.start().pegs(ilp.board()).collect(),
            total: sol.total(),
            moves,
        }
    }

    /// Multiplicity vector against the instance's column order. Entries are
    /// matched by their move, not the stored column index.
    pub fn to_vector(&self, ilp: &IlpInstance) -> Result<Vec<u32>, ImportError> {
        let index: HashMap<&crate::moves::Move, usize> =
            ilp.moves().moves().iter().enumerate().map(|(j, m)| (m, j)).collect();
        let mut x = vec![0u32; ilp.n_moves()];
        for e in &self.moves {
            let m = crate::moves::Move::new(e.gains.clone(), e.loss);
            let j = *index
                .get(&m)
                .ok_or_else(|| ImportError::UnknownVariable(format!("{m:?}")))?;
            x[j] += e.count;
        }
        Ok(x)
    }
}

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("line {line}: cannot parse {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: {name} = {value} is not an integer")]
    FractionalValue { line: usize, name: String, value: f64 },
    #[error("line {line}: {name} = {value} is negative")]
    NegativeValue { line: usize, name: String, value: f64 },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("line {line}: {name} assigned twice")]
    Duplicate { line: usize, name: String },
    #[error(transparent)]
    Constraint(#[from] RelaxedError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn push_terms(out: &mut String, terms: impl Iterator<Item = (i64, usize)>) {
    let mut first = true;
    let mut on_line = 0;
    for (a, j) in terms {
        if on_line == 8 {
            out.push_str("\n   ");
            on_line = 0;
        }
        let sign = if a < 0 {
            " -"
        } else if first {
            ""
        } else {
            " +"
        };
        let mag = a.unsigned_abs();
        if mag == 1 {
            let _ = write!(out, "{sign} x_{j}");
        } else {
            let _ = write!(out, "{sign} {mag} x_{j}");
        }
        first = false;
        on_line += 1;
    }
}

/// Render the instance in CPLEX LP format: general integer variables `x_<j>`
/// in column order, a `lo_<i>`/`hi_<i>` row pair per position.
pub fn lp_string(ilp: &IlpInstance) -> String {
    let m = ilp.n_moves();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ relaxed army: {} positions, {} moves, objective {:?}",
        ilp.n_positions(),
        m,
        ilp.objective()
    );
    out.push_str("Minimize\n obj:");
    match ilp.objective() {
        Objective::MinimizeTotalMoves if m > 0 => push_terms(&mut out, (0..m).map(|j| (1, j))),
        _ if m > 0 => out.push_str(" 0 x_0"),
        _ => {}
    }
    out.push_str("\nSubject To\n");
    for i in 0..ilp.n_positions() {
        let row = ilp.moves().row(i);
        let b = ilp.b[i] as i64;
        let c = ilp.c[i] as i64;
        let p = ilp.board().cell(i);
        if row.is_empty() && m == 0 {
            continue;
        }
        for (name, op, rhs) in [("lo", ">=", -b), ("hi", "<=", c - b)] {
            let _ = write!(out, " {name}_{i}:");
            if row.is_empty() {
                out.push_str(" 0 x_0");
            } else {
                push_terms(&mut out, row.iter().map(|&(j, a)| (a as i64, j)));
            }
            let _ = writeln!(out, " {op} {rhs}");
        }
        let _ = writeln!(out, " \\ row {i} is cell {p}");
    }
    out.push_str("Bounds\n");
    for (j, cap) in ilp.caps.iter().enumerate() {
        let _ = writeln!(out, " 0 <= x_{j} <= {cap}");
    }
    if m > 0 {
        out.push_str("General\n");
        for chunk in (0..m).collect::<Vec<_>>().chunks(10) {
            let names: Vec<String> = chunk.iter().map(|j| format!("x_{j}")).collect();
            let _ = writeln!(out, " {}", names.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

pub fn export_lp(ilp: &IlpInstance, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, lp_string(ilp))
}

/// Parse an assignment listing: one `x_<j> <value>` per line, `#` starts a
/// comment. Unlisted variables are 0. The result is validated against the
/// instance.
pub fn parse_solution(ilp: &IlpInstance, text: &str) -> Result<RelaxedSolution, ImportError> {
    let mut x = vec![0u32; ilp.n_moves()];
    let mut seen = vec![false; ilp.n_moves()];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut parts = body.split_whitespace();
        let (Some(name), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(ImportError::Syntax {
                line,
                text: raw.to_string(),
            });
        };
        let j: usize = name
            .strip_prefix("x_")
            .and_then(|s| s.parse().ok())
            .filter(|&j| j < ilp.n_moves())
            .ok_or_else(|| ImportError::UnknownVariable(name.to_string()))?;
        let value: f64 = val.parse().map_err(|_| ImportError::Syntax {
            line,
            text: raw.to_string(),
        })?;
        if value < -1e-9 {
            return Err(ImportError::NegativeValue {
                line,
                name: name.to_string(),
                value,
            });
        }
        let rounded = value.round();
        if (value - rounded).abs() > 1e-6 {
            return Err(ImportError::FractionalValue {
                line,
                name: name.to_string(),
                value,
            });
        }
        if seen[j] {
            return Err(ImportError::Duplicate {
                line,
                name: name.to_string(),
            });
        }
        seen[j] = true;
        x[j] = rounded as u32;
    }
    Ok(RelaxedSolution::new(ilp, x)?)
}

pub fn import_solution(ilp: &IlpInstance, path: impl AsRef<Path>) -> Result<RelaxedSolution, ImportError> {
    let text = std::fs::read_to_string(path)?;
    parse_solution(ilp, &text)
}

/// Inverse of [`parse_solution`]: nonzero entries only.
pub fn solution_listing(sol: &RelaxedSolution) -> String {
    let mut out = format!("# |x| = {}\n", sol.total());
    for (j, &v) in sol.x().iter().enumerate() {
        if v > 0 {
            let _ = writeln!(out, "x_{j} {v}");
        }
    }
    out
}
