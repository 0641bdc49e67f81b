//! Gadget footprints, behavioural contracts and their exhaustive check.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, Configuration, Position};
use crate::moves::Jump;
use crate::reachability::{config_bits, forward_net, search_net, Limits, Literal, ReachError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortKind {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
    pub pos: Position,
    pub kind: PortKind,
}

/// Rotation by quarter turns (counter-clockwise) applied after an optional
/// reflection `x -> -x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transform {
    pub quarter_turns: u8,
    pub mirror: bool,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        quarter_turns: 0,
        mirror: false,
    };

    pub fn rot(quarter_turns: u8) -> Self {
        Transform {
            quarter_turns: quarter_turns % 4,
            mirror: false,
        }
    }

    pub fn mirrored() -> Self {
        Transform {
            quarter_turns: 0,
            mirror: true,
        }
    }

    pub fn apply(&self, p: Position) -> Position {
        let mut q = if self.mirror { Position::new(-p.x, p.y) } else { p };
        for _ in 0..self.quarter_turns % 4 {
            q = Position::new(-q.y, q.x);
        }
        q
    }
}

/// Cells of a gadget with their initial pegs and named ports. Port cells
/// start empty; an input port receives a peg when its signal is true.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Footprint {
    /// Cell -> initially holds a peg.
    pub cells: BTreeMap<Position, bool>,
    pub ports: Vec<Port>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FootprintError {
    #[error("port '{0}' appears more than once")]
    DuplicatePort(char),
    #[error("port '{0}' is not drawn")]
    MissingPort(char),
    #[error("character '{0}' is neither a cell nor a declared port")]
    UnknownGlyph(char),
}

impl Footprint {
    /// Reads an ASCII drawing: `o` peg, `_` hole, `.` or space for no cell,
    /// and one letter per declared port. Rows go down, so row `r` is `y = -r`.
    pub fn from_art(art: &str, ports: &[(char, &str, PortKind)]) -> Result<Self, FootprintError> {
        let mut cells = BTreeMap::new();
        let mut found: BTreeMap<char, Position> = BTreeMap::new();
        for (r, line) in art.trim_matches('\n').lines().enumerate() {
            for (c, ch) in line.chars().enumerate() {
                let p = Position::new(c as i32, -(r as i32));
                match ch {
                    ' ' | '.' => {}
                    'o' => {
                        cells.insert(p, true);
                    }
                    '_' => {
                        cells.insert(p, false);
                    }
                    _ if ports.iter().any(|(g, _, _)| *g == ch) => {
                        if found.insert(ch, p).is_some() {
                            return Err(FootprintError::DuplicatePort(ch));
                        }
                        cells.insert(p, false);
                    }
                    _ => return Err(FootprintError::UnknownGlyph(ch)),
                }
            }
        }
        let ports = ports
            .iter()
            .map(|&(g, name, kind)| {
                let pos = *found.get(&g).ok_or(FootprintError::MissingPort(g))?;
                Ok(Port {
                    name: name.to_string(),
                    pos,
                    kind,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Footprint { cells, ports })
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn inputs(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.kind == PortKind::Input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.kind == PortKind::Output)
    }

    pub fn pegs(&self) -> impl Iterator<Item = Position> + '_ {
        self.cells.iter().filter(|(_, &v)| v).map(|(&p, _)| p)
    }

    pub fn peg_count(&self) -> usize {
        self.pegs().count()
    }

    pub fn transformed(&self, t: Transform, dx: i32, dy: i32) -> Footprint {
        let map = |p: Position| t.apply(p).offset(dx, dy);
        Footprint {
            cells: self.cells.iter().map(|(&p, &v)| (map(p), v)).collect(),
            ports: self
                .ports
                .iter()
                .map(|p| Port {
                    pos: map(p.pos),
                    ..p.clone()
                })
                .collect(),
        }
    }

    /// Smallest and largest coordinates, as `(min, max)`.
    pub fn bounds(&self) -> (Position, Position) {
        let xs = self.cells.keys().map(|p| p.x);
        let ys = self.cells.keys().map(|p| p.y);
        (
            Position::new(xs.clone().min().unwrap_or(0), ys.clone().min().unwrap_or(0)),
            Position::new(xs.max().unwrap_or(0), ys.max().unwrap_or(0)),
        )
    }

    /// Board over the footprint cells with an empty desert.
    pub fn board(&self) -> Board {
        let target = self
            .outputs()
            .next()
            .map(|p| p.pos)
            .or_else(|| self.cells.keys().next().copied())
            .unwrap_or(Position::new(0, 0));
        Board::new(self.cells.keys().copied(), [], target).expect("footprint cells are distinct")
    }

    /// Initial configuration with the given input ports holding pegs.
    pub fn start(&self, board: &Board, true_inputs: &[&str]) -> Configuration {
        let extra = self
            .ports
            .iter()
            .filter(|p| true_inputs.contains(&p.name.as_str()))
            .map(|p| p.pos);
        Configuration::from_pegs(board, self.pegs().chain(extra)).expect("footprint cells are on the board")
    }

    /// The drawing accepted by [`Footprint::from_art`], ports drawn as the
    /// first letter of their name.
    pub fn to_art(&self) -> String {
        let (lo, hi) = self.bounds();
        let mut out = String::new();
        for y in (lo.y..=hi.y).rev() {
            let mut row = String::new();
            for x in lo.x..=hi.x {
                let p = Position::new(x, y);
                let ch = match (self.ports.iter().find(|q| q.pos == p), self.cells.get(&p)) {
                    (Some(q), _) => q.name.chars().next().unwrap_or('?'),
                    (None, Some(true)) => 'o',
                    (None, Some(false)) => '_',
                    (None, None) => '.',
                };
                row.push(ch);
            }
            out.push_str(row.trim_end_matches('.'));
            out.push('\n');
        }
        out
    }
}

/// One row of a contract: an input assignment, the output sets that must be
/// simultaneously occupiable and those that must never be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractRow {
    pub inputs: Vec<bool>,
    pub required: Vec<Vec<String>>,
    pub forbidden: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contract {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<ContractRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub name: String,
    pub footprint: Footprint,
    pub contract: Contract,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RowFailure {
    RequiredUnreachable { set: Vec<String> },
    ForbiddenReached { set: Vec<String>, witness: Vec<Jump> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub inputs: Vec<bool>,
    pub failures: Vec<RowFailure>,
    pub explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetReport {
    pub name: String,
    pub rows: Vec<RowReport>,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.failures.is_empty())
    }

    pub fn explored(&self) -> u64 {
        self.rows.iter().map(|r| r.explored).sum()
    }
}

impl fmt::Display for GadgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bad = self.rows.iter().filter(|r| !r.failures.is_empty()).count();
        write!(
            f,
            "{}: {} rows, {} failing, {} states",
            self.name,
            self.rows.len(),
            bad,
            self.explored()
        )
    }
}

/// Checks every contract row with goal-directed exact searches.
/// `limits.max_states` bounds each individual search.
pub fn verify_gadget(spec: &GadgetSpec, limits: Limits) -> Result<GadgetReport, ReachError> {
    let fp = &spec.footprint;
    let board = fp.board();
    let (net, jumps) = forward_net(&board);
    let cell = |name: &str| -> usize {
        let p = fp.port(name).unwrap_or_else(|| panic!("{}: no port {name}", spec.name));
        board.index_of(p.pos).expect("port is a cell")
    };
    let mut rows = Vec::new();
    for row in &spec.contract.rows {
        let on: Vec<&str> = spec
            .contract
            .inputs
            .iter()
            .zip(&row.inputs)
            .filter(|(_, &v)| v)
            .map(|(n, _)| n.as_str())
            .collect();
        let start = config_bits(&fp.start(&board, &on));
        let mut failures = Vec::new();
        let mut explored = 0;
        for (set, required) in row
            .required
            .iter()
            .map(|s| (s, true))
            .chain(row.forbidden.iter().map(|s| (s, false)))
        {
            let goal: Vec<Literal> = set.iter().map(|n| Literal::Full(cell(n))).collect();
            let r = search_net(&net, &start, &goal, limits)?;
            explored += r.explored;
            match (required, r.path) {
                (true, None) => failures.push(RowFailure::RequiredUnreachable { set: set.clone() }),
                (false, Some(path)) => failures.push(RowFailure::ForbiddenReached {
                    set: set.clone(),
                    witness: path.into_iter().map(|t| jumps[t]).collect(),
                }),
                _ => {}
            }
        }
        rows.push(RowReport {
            inputs: row.inputs.clone(),
            failures,
            explored,
        });
    }
    Ok(GadgetReport {
        name: spec.name.clone(),
        rows,
    })
}
