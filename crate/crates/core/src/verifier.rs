//! Move scripts in the platoon notation, forward replay, and reconstruction
//! of the starting army from a jump list.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{make_board, Axis, Board, Configuration, Position, ShapeSpec};
use crate::moves::{Direction, Jump};

/// The bundled army for the 11×11 square desert, in script notation.
pub const ARMY_11X11: &str = include_str!("../data/army11.txt");

/// A board large enough to hold the bundled army around the 11×11 desert.
pub fn army_board() -> Board {
    make_board(&ShapeSpec::square(11, 18)).expect("valid shape")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScriptItem {
    Jump(Jump),
    /// Mirror image of an earlier platoon.
    Symmetric(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Platoon {
    pub name: String,
    pub items: Vec<ScriptItem>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveScript {
    pub platoons: Vec<Platoon>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown direction {0:?}")]
    UnknownDirection(String),
    #[error("expected {expected}, found {found:?}")]
    Unexpected { expected: &'static str, found: String },
    #[error("integer out of range: {0}")]
    BadInteger(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("platoon {reference:?} referenced before it is defined")]
    UnresolvedRef { reference: String },
}

pub fn parse_direction(s: &str) -> Option<Direction> {
    match s {
        "R" | "→" => Some(Direction::Right),
        "L" | "←" => Some(Direction::Left),
        "D" | "↓" => Some(Direction::Down),
        "U" | "↑" => Some(Direction::Up),
        _ => None,
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Int(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) | Tok::Int(w) => f.write_str(w),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            text,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Next token with its starting line and column.
    fn next_tok(&mut self) -> Option<(Tok, usize, usize)> {
        loop {
            let &(_, c) = self.chars.peek()?;
            if c == '#' {
                while self.chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
        let (line, col) = (self.line, self.col);
        let &(start, c) = self.chars.peek()?;
        if c == '-' || c.is_ascii_digit() {
            self.bump();
            while self.chars.peek().is_some_and(|&(_, c)| c.is_ascii_digit()) {
                self.bump();
            }
            let end = self.chars.peek().map_or(self.text.len(), |&(i, _)| i);
            return Some((Tok::Int(self.text[start..end].to_string()), line, col));
        }
        if c.is_alphanumeric() || c == '_' {
            while self.chars.peek().is_some_and(|&(_, c)| c.is_alphanumeric() || c == '_') {
                self.bump();
            }
            let end = self.chars.peek().map_or(self.text.len(), |&(i, _)| i);
            return Some((Tok::Word(self.text[start..end].to_string()), line, col));
        }
        self.bump();
        Some((Tok::Sym(c), line, col))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<Option<(Tok, usize, usize)>>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<&(Tok, usize, usize)> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex.next_tok());
        }
        self.peeked.as_ref().unwrap().as_ref()
    }

    fn next(&mut self) -> Option<(Tok, usize, usize)> {
        match self.peeked.take() {
            Some(t) => t,
            None => self.lex.next_tok(),
        }
    }

    fn err_at(&self, line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, column, kind }
    }

    fn expect(&mut self, expected: &'static str, ok: impl Fn(&Tok) -> bool) -> Result<(Tok, usize, usize), ParseError> {
        match self.next() {
            Some(t) if ok(&t.0) => Ok(t),
            Some((t, l, c)) => Err(self.err_at(
                l,
                c,
                ParseErrorKind::Unexpected {
                    expected,
                    found: t.to_string(),
                },
            )),
            None => Err(self.err_at(
                self.lex.line,
                self.lex.col,
                ParseErrorKind::Unexpected {
                    expected,
                    found: "end of input".into(),
                },
            )),
        }
    }

    fn int(&mut self) -> Result<i32, ParseError> {
        let (t, l, c) = self.expect("an integer", |t| matches!(t, Tok::Int(_)))?;
        let s = t.to_string();
        s.parse().map_err(|_| self.err_at(l, c, ParseErrorKind::BadInteger(s)))
    }

    fn sym(&mut self, s: char, expected: &'static str) -> Result<(), ParseError> {
        self.expect(expected, |t| *t == Tok::Sym(s)).map(|_| ())
    }

    fn jump(&mut self) -> Result<Jump, ParseError> {
        self.sym('(', "'('")?;
        let x = self.int()?;
        self.sym(',', "','")?;
        let y = self.int()?;
        self.sym(',', "','")?;
        let (t, l, c) = self.next().ok_or_else(|| {
            self.err_at(
                self.lex.line,
                self.lex.col,
                ParseErrorKind::UnknownDirection(String::new()),
            )
        })?;
        let d = parse_direction(&t.to_string())
            .ok_or_else(|| self.err_at(l, c, ParseErrorKind::UnknownDirection(t.to_string())))?;
        self.sym(')', "')'")?;
        Ok(Jump::new(x, y, d))
    }
}

fn is_word(t: &Tok, w: &str) -> bool {
    matches!(t, Tok::Word(s) if s.eq_ignore_ascii_case(w))
}

/// Parse the platoon notation:
///
/// ```text
/// Platoon A: (-7,-2,R), (-9,-2,→)
/// Platoon B: symmetric moves of Platoon A
/// Finale: (0,-2,U)
/// ```
///
/// Jumps before the first header go to a platoon with an empty name.
pub fn parse_move_script(text: &str) -> Result<MoveScript, ParseError> {
    let mut p = Parser {
        lex: Lexer::new(text),
        peeked: None,
    };
    let mut script = MoveScript::default();
    while let Some((tok, line, col)) = p.peek().cloned() {
        match tok {
            Tok::Word(ref w) if w.eq_ignore_ascii_case("platoon") || w.eq_ignore_ascii_case("finale") => {
                p.next();
                let name = if w.eq_ignore_ascii_case("platoon") {
                    p.expect("a platoon name", |t| matches!(t, Tok::Word(_) | Tok::Int(_)))?
                        .0
                        .to_string()
                } else {
                    "Finale".to_string()
                };
                p.sym(':', "':'")?;
                script.platoons.push(Platoon {
                    name,
                    items: Vec::new(),
                });
            }
            Tok::Word(ref w) if w.eq_ignore_ascii_case("symmetric") => {
                p.next();
                for word in ["moves", "of", "platoon"] {
                    p.expect("'symmetric moves of Platoon <name>'", |t| is_word(t, word))?;
                }
                let name = p
                    .expect("a platoon name", |t| matches!(t, Tok::Word(_) | Tok::Int(_)))?
                    .0
                    .to_string();
                current(&mut script).items.push(ScriptItem::Symmetric(name));
            }
            Tok::Sym('(') => {
                let j = p.jump()?;
                current(&mut script).items.push(ScriptItem::Jump(j));
            }
            Tok::Sym(',') | Tok::Sym('.') | Tok::Sym(';') => {
                p.next();
            }
            other => {
                return Err(p.err_at(
                    line,
                    col,
                    ParseErrorKind::Unexpected {
                        expected: "a jump, a platoon header or a symmetric reference",
                        found: other.to_string(),
                    },
                ))
            }
        }
    }
    Ok(script)
}

fn current(script: &mut MoveScript) -> &mut Platoon {
    if script.platoons.is_empty() {
        script.platoons.push(Platoon {
            name: String::new(),
            items: Vec::new(),
        });
    }
    script.platoons.last_mut().unwrap()
}

/// Reflect a forward jump across an axis through the origin.
pub fn reflect_jump(j: Jump, axis: Axis) -> Jump {
    let dir = match (axis, j.dir) {
        (Axis::Vertical, d) => d.mirrored(),
        (Axis::Horizontal, Direction::Up) => Direction::Down,
        (Axis::Horizontal, Direction::Down) => Direction::Up,
        (Axis::Horizontal, d) => d,
    };
    Jump {
        from: j.from.reflect(axis),
        dir,
    }
}

/// Flatten a script into forward jumps; symmetric references expand to the
/// reflection of the referenced platoon.
pub fn expand_script(script: &MoveScript, axis: Axis) -> Result<Vec<Jump>, ScriptError> {
    let mut done: HashMap<&str, Vec<Jump>> = HashMap::new();
    let mut all = Vec::new();
    for platoon in &script.platoons {
        let mut jumps = Vec::new();
        for item in &platoon.items {
            match item {
                ScriptItem::Jump(j) => jumps.push(*j),
                ScriptItem::Symmetric(name) => {
                    let src = done.get(name.as_str()).ok_or_else(|| ScriptError::UnresolvedRef {
                        reference: name.clone(),
                    })?;
                    jumps.extend(src.iter().map(|&j| reflect_jump(j, axis)));
                }
            }
        }
        all.extend_from_slice(&jumps);
        done.insert(platoon.name.as_str(), jumps);
    }
    Ok(all)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpFailure {
    OffBoard,
    NoPegToMove,
    NoPegToJumpOver,
    LandingOccupied,
    StartNotStrict,
}

impl fmt::Display for JumpFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JumpFailure::OffBoard => "cell is off the board",
            JumpFailure::NoPegToMove => "no peg to move",
            JumpFailure::NoPegToJumpOver => "no peg to jump over",
            JumpFailure::LandingOccupied => "landing cell occupied",
            JumpFailure::StartNotStrict => "start is not a 0/1 configuration",
        })
    }
}

/// `index` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("jump {} {jump} at {position}: {reason}", index + 1)]
pub struct IllegalJump {
    pub index: usize,
    pub jump: Jump,
    pub position: Position,
    pub reason: JumpFailure,
}

/// Play forward jumps with full occupancy checks.
pub fn replay_forward(board: &Board, start: &Configuration, jumps: &[Jump]) -> Result<Configuration, IllegalJump> {
    let mut cfg = start.clone();
    if !cfg.is_strict() {
        let position = (0..board.len())
            .find(|&i| !(0..=1).contains(&cfg.get(i)))
            .map_or(board.target(), |i| board.cell(i));
        return Err(IllegalJump {
            index: 0,
            jump: jumps.first().copied().unwrap_or(Jump::new(0, 0, Direction::Right)),
            position,
            reason: JumpFailure::StartNotStrict,
        });
    }
    for (index, &jump) in jumps.iter().enumerate() {
        let fail = |position, reason| IllegalJump {
            index,
            jump,
            position,
            reason,
        };
        let cell = |p: Position| board.index_of(p).ok_or(fail(p, JumpFailure::OffBoard));
        let a = cell(jump.from)?;
        let b = cell(jump.over())?;
        let c = cell(jump.to())?;
        let counts = cfg.counts_mut();
        if counts[a] != 1 {
            return Err(fail(jump.from, JumpFailure::NoPegToMove));
        }
        if counts[b] != 1 {
            return Err(fail(jump.over(), JumpFailure::NoPegToJumpOver));
        }
        if counts[c] != 0 {
            return Err(fail(jump.to(), JumpFailure::LandingOccupied));
        }
        counts[a] = 0;
        counts[b] = 0;
        counts[c] = 1;
    }
    Ok(cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("jump {} {jump}: {reason} at {position}", index + 1)]
    InconsistentScript {
        index: usize,
        jump: Jump,
        position: Position,
        reason: JumpFailure,
    },
    #[error("the army needs a peg inside the desert at {0}")]
    DesertViolation(Position),
}

/// The smallest strict start from which `jumps` replay legally: every cell
/// a jump first uses as a source or as the jumped-over cell starts full,
/// everything else starts empty.
pub fn initial_config_of_script(board: &Board, jumps: &[Jump]) -> Result<Configuration, ReconstructError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Cell {
        Untouched,
        Full,
        Empty,
    }
    let mut state = vec![Cell::Untouched; board.len()];
    let mut start = Configuration::empty(board);
    for (index, &jump) in jumps.iter().enumerate() {
        let fail = |position, reason| ReconstructError::InconsistentScript {
            index,
            jump,
            position,
            reason,
        };
        let cell = |p: Position| board.index_of(p).ok_or(fail(p, JumpFailure::OffBoard));
        let cells = [cell(jump.from)?, cell(jump.over())?, cell(jump.to())?];
        for (k, &i) in cells[..2].iter().enumerate() {
            match state[i] {
                Cell::Untouched => start.counts_mut()[i] = 1,
                Cell::Empty => {
                    let (p, r) = if k == 0 {
                        (jump.from, JumpFailure::NoPegToMove)
                    } else {
                        (jump.over(), JumpFailure::NoPegToJumpOver)
                    };
                    return Err(fail(p, r));
                }
                Cell::Full => {}
            }
        }
        if state[cells[2]] == Cell::Full {
            return Err(fail(jump.to(), JumpFailure::LandingOccupied));
        }
        state[cells[0]] = Cell::Empty;
        state[cells[1]] = Cell::Empty;
        state[cells[2]] = Cell::Full;
    }
    if let Some(p) = start.pegs(board).find(|&p| board.is_desert_at(p)) {
        return Err(ReconstructError::DesertViolation(p));
    }
    Ok(start)
}

/// Summary of a full script check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub moves: usize,
    pub initial_pegs: Option<usize>,
    pub start_outside_desert: bool,
    pub legal: bool,
    pub target_conquered: bool,
    pub error: Option<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.legal && self.start_outside_desert && self.target_conquered
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} moves, ", self.moves)?;
        f.write_str(if self.legal { "legal" } else { "illegal" })?;
        f.write_str(if self.start_outside_desert {
            ", start outside desert"
        } else {
            ", start touches desert"
        })?;
        f.write_str(if self.target_conquered {
            ", target conquered"
        } else {
            ", target not reached"
        })?;
        if let Some(e) = &self.error {
            write!(f, " ({e})")?;
        }
        Ok(())
    }
}

/// Reconstruct the army behind `jumps`, replay it, and check the target.
pub fn verify_jumps(board: &Board, jumps: &[Jump]) -> VerifyReport {
    let mut report = VerifyReport {
        moves: jumps.len(),
        initial_pegs: None,
        start_outside_desert: false,
        legal: false,
        target_conquered: false,
        error: None,
    };
    let start = match initial_config_of_script(board, jumps) {
        Ok(s) => s,
        Err(ReconstructError::DesertViolation(p)) => {
            report.error = Some(format!("peg needed inside the desert at {p}"));
            // still replay from the unrestricted start to report legality
            let Ok(start) = initial_config_of_script(&board.with_desert([]).expect("same cells"), jumps) else {
                return report;
            };
            report.initial_pegs = Some(start.total() as usize);
            report.legal = replay_forward(board, &start, jumps).is_ok();
            return report;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    verify_from(board, &start, jumps)
}

/// Replay `jumps` from an explicit start.
pub fn verify_from(board: &Board, start: &Configuration, jumps: &[Jump]) -> VerifyReport {
    let mut report = VerifyReport {
        moves: jumps.len(),
        initial_pegs: Some(start.total() as usize),
        start_outside_desert: start.pegs(board).all(|p| !board.is_desert_at(p)),
        legal: false,
        target_conquered: false,
        error: None,
    };
    match replay_forward(board, start, jumps) {
        Ok(end) => {
            report.legal = true;
            report.target_conquered = end.at(board, board.target()) == Some(1);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line3() -> Board {
        Board::new((1..=3).map(|x| Position::new(x, 0)), [], Position::new(3, 0)).unwrap()
    }

    #[test]
    fn parse_simple() {
        let s = parse_move_script("Platoon A: (-7,-2,R), (-9,-2,R)").unwrap();
        assert_eq!(s.platoons.len(), 1);
        assert_eq!(s.platoons[0].name, "A");
        assert_eq!(s.platoons[0].items.len(), 2);
    }

    #[test]
    fn parse_symmetric() {
        let s = parse_move_script("Platoon A: (1,2,U)\nPlatoon B: symmetric moves of Platoon A").unwrap();
        assert_eq!(s.platoons[1].items, vec![ScriptItem::Symmetric("A".into())]);
    }

    #[test]
    fn parse_unicode_and_comments() {
        let s = parse_move_script("# heading\nFinale: (0,-2,↑) # last\n(1,1,←)").unwrap();
        let jumps = expand_script(&s, Axis::Vertical).unwrap();
        assert_eq!(
            jumps,
            vec![Jump::new(0, -2, Direction::Up), Jump::new(1, 1, Direction::Left)]
        );
        assert_eq!(jumps[0].to(), Position::new(0, 0));
    }

    #[test]
    fn parse_errors() {
        let e = parse_move_script("Platoon A:\n  (1,2,X)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert_eq!(e.kind, ParseErrorKind::UnknownDirection("X".into()));
        assert!(parse_move_script("(1,2)").is_err());
        assert!(parse_move_script("Platoon A: hello").is_err());
    }

    #[test]
    fn mirror_expansion() {
        let s = parse_move_script("Platoon A: (-7,-2,R), (-8,-4,U)\nPlatoon B: symmetric moves of Platoon A").unwrap();
        let j = expand_script(&s, Axis::Vertical).unwrap();
        assert_eq!(j[2], Jump::new(7, -2, Direction::Left));
        assert_eq!(j[3], Jump::new(8, -4, Direction::Up));
    }

    #[test]
    fn forward_reference_rejected() {
        let s = parse_move_script("Platoon B: symmetric moves of Platoon A\nPlatoon A: (0,0,R)").unwrap();
        assert!(matches!(
            expand_script(&s, Axis::Vertical),
            Err(ScriptError::UnresolvedRef { .. })
        ));
    }

    #[test]
    fn replay_line() {
        let b = line3();
        let start = Configuration::from_pegs(&b, [Position::new(1, 0), Position::new(2, 0)]).unwrap();
        let end = replay_forward(&b, &start, &[Jump::new(1, 0, Direction::Right)]).unwrap();
        assert_eq!(end.pegs(&b).collect::<Vec<_>>(), vec![Position::new(3, 0)]);
        let err = replay_forward(&b, &start, &[Jump::new(2, 0, Direction::Left)]).unwrap_err();
        assert_eq!(err.reason, JumpFailure::OffBoard);
        assert_eq!(err.position, Position::new(0, 0));
    }

    #[test]
    fn reconstruct_single_jump() {
        let b = line3();
        let s = initial_config_of_script(&b, &[Jump::new(1, 0, Direction::Right)]).unwrap();
        assert_eq!(
            s.pegs(&b).collect::<Vec<_>>(),
            vec![Position::new(1, 0), Position::new(2, 0)]
        );
    }

    #[test]
    fn reconstruct_inconsistent() {
        let b = Board::rectangle(0, 4, 0, 0, Position::new(0, 0)).unwrap();
        // second jump needs a peg at (1,0), which the first jump removed
        let jumps = [Jump::new(0, 0, Direction::Right), Jump::new(1, 0, Direction::Right)];
        assert!(matches!(
            initial_config_of_script(&b, &jumps),
            Err(ReconstructError::InconsistentScript { index: 1, .. })
        ));
    }

    #[test]
    fn reconstruct_desert_violation() {
        let b = line3().with_desert([Position::new(2, 0)]).unwrap();
        assert_eq!(
            initial_config_of_script(&b, &[Jump::new(1, 0, Direction::Right)]).unwrap_err(),
            ReconstructError::DesertViolation(Position::new(2, 0))
        );
    }

    #[test]
    fn empty_script_with_peg_on_target() {
        let b = line3();
        assert!(!verify_jumps(&b, &[]).target_conquered);
        let start = Configuration::from_pegs(&b, [b.target()]).unwrap();
        assert_eq!(replay_forward(&b, &start, &[]).unwrap(), start);
        assert!(verify_from(&b, &start, &[]).ok());
    }
}
