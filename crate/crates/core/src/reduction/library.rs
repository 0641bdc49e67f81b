//! The gadget library: small hand-drawn footprints and composites assembled
//! from them on a [`Canvas`], each paired with its contract.

use thiserror::Error;

use crate::board::Position;
use crate::reduction::gadget::{Contract, ContractRow, Footprint, GadgetSpec, PortKind, Transform};
use crate::reduction::layout::{Canvas, LayoutFailure};

use PortKind::{Input, Output};

pub const GADGET_NAMES: [&str; 15] = [
    "wire",
    "shift",
    "and",
    "or",
    "choice",
    "half-crossover",
    "crossing",
    "axb",
    "fan-out",
    "control-crossover",
    "dr-not",
    "dr-and",
    "dr-nand",
    "dr-fan-out",
    "dr-control-crossover",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LibraryError {
    #[error("unknown gadget '{0}'")]
    UnknownGadget(String),
    #[error("layout of '{gadget}' failed: {source}")]
    Layout { gadget: String, source: LayoutFailure },
}

fn art(text: &str, ports: &[(char, &str, PortKind)]) -> Footprint {
    Footprint::from_art(text, ports).expect("library drawing is well formed")
}

pub fn wire_footprint() -> Footprint {
    art("a\no\n_\no\n_\no\nz", &[('a', "a", Input), ('z', "z", Output)])
}

pub fn shift_footprint() -> Footprint {
    art(".a\n.o\n__o\no\nz", &[('a', "a", Input), ('z', "z", Output)])
}

pub fn and_footprint() -> Footprint {
    art(
        "A...B\no.o.o\n_._o_\n_o_\nZ",
        &[('A', "a", Input), ('B', "b", Input), ('Z', "z", Output)],
    )
}

pub fn or_footprint() -> Footprint {
    art(
        "A...B\no...o\n_o_o_\n..o\n..Z",
        &[('A', "a", Input), ('B', "b", Input), ('Z', "z", Output)],
    )
}

pub fn choice_footprint() -> Footprint {
    art("N\no\no\no\nP", &[('P', "p", Output), ('N', "n", Output)])
}

pub fn half_crossover_footprint() -> Footprint {
    art(
        "....Y
....o
...o__
..o..o
Xo_.._.._oZ
.._o_o_o_
....._..o
.....o
....__o
....o
....W",
        &[
            ('X', "x", Input),
            ('Y', "y", Input),
            ('Z', "x'", Output),
            ('W', "y'", Output),
        ],
    )
}

pub fn crossing_footprint() -> Footprint {
    art(
        "..C
..o
.o__
...o
Xo___oY
...o
..__o
..o
..D",
        &[
            ('C', "c", Input),
            ('X', "x", Input),
            ('D', "c_pass", Output),
            ('Y', "x_c", Output),
        ],
    )
}

fn set(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn row(inputs: &[bool], required: &[&[&str]], forbidden: &[&[&str]]) -> ContractRow {
    ContractRow {
        inputs: inputs.to_vec(),
        required: required.iter().map(|s| set(s)).collect(),
        forbidden: forbidden.iter().map(|s| set(s)).collect(),
    }
}

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u32 << n).map(move |m| (0..n).map(|k| m >> (n - 1 - k) & 1 == 1).collect())
}

/// Contract with a single output that must be reachable exactly when `f`
/// holds.
fn single_output(inputs: &[&str], f: impl Fn(&[bool]) -> bool) -> Contract {
    Contract {
        inputs: set(inputs),
        outputs: set(&["z"]),
        rows: assignments(inputs.len())
            .map(|v| {
                if f(&v) {
                    row(&v, &[&["z"]], &[])
                } else {
                    row(&v, &[], &[&["z"]])
                }
            })
            .collect(),
    }
}

/// Dual-rail rows: every consistent assignment of the signals plus the row
/// with every rail empty. `f` maps the signal values to the rows' required
/// and forbidden sets.
fn dual_rail(
    inputs: &[&str],
    outputs: &[&str],
    signals: usize,
    f: impl Fn(Option<&[bool]>) -> (Vec<Vec<&'static str>>, Vec<Vec<&'static str>>),
) -> Contract {
    let mut rows = Vec::new();
    let to_row = |inputs: Vec<bool>, (req, forb): (Vec<Vec<&str>>, Vec<Vec<&str>>)| ContractRow {
        inputs,
        required: req.iter().map(|s| set(s)).collect(),
        forbidden: forb.iter().map(|s| set(s)).collect(),
    };
    for v in assignments(signals) {
        let rails: Vec<bool> = v.iter().flat_map(|&b| [b, !b]).collect();
        rows.push(to_row(rails, f(Some(&v))));
    }
    rows.push(to_row(vec![false; 2 * signals], f(None)));
    Contract {
        inputs: set(inputs),
        outputs: set(outputs),
        rows,
    }
}

/// Behavioural contract of a library gadget.
pub fn gadget_contract(name: &str) -> Result<Contract, LibraryError> {
    Ok(match name {
        "wire" | "shift" => Contract {
            inputs: set(&["a"]),
            outputs: set(&["z"]),
            rows: vec![row(&[false], &[], &[&["z"]]), row(&[true], &[&["z"]], &[])],
        },
        "and" => single_output(&["a", "b"], |v| v[0] && v[1]),
        "or" => single_output(&["a", "b"], |v| v[0] || v[1]),
        "axb" => single_output(&["a", "x", "b"], |v| v[1] || (v[0] && v[2])),
        "choice" => Contract {
            inputs: vec![],
            outputs: set(&["p", "n"]),
            rows: vec![row(&[], &[&["p"], &["n"]], &[&["p", "n"]])],
        },
        "half-crossover" => Contract {
            inputs: set(&["x", "y"]),
            outputs: set(&["x'", "y'"]),
            rows: vec![
                row(&[false, false], &[], &[&["x'"], &["y'"]]),
                row(&[false, true], &[&["y'"]], &[&["x'"]]),
                row(&[true, false], &[&["x'"]], &[&["y'"]]),
                row(&[true, true], &[&["x'"], &["y'"]], &[&["x'", "y'"]]),
            ],
        },
        "crossing" => Contract {
            inputs: set(&["c", "x"]),
            outputs: set(&["c_pass", "x_c"]),
            rows: vec![
                row(&[false, false], &[], &[&["c_pass"], &["x_c"]]),
                row(&[false, true], &[], &[&["c_pass"], &["x_c"]]),
                row(&[true, false], &[&["c_pass"]], &[&["x_c"]]),
                row(&[true, true], &[&["c_pass"], &["x_c"]], &[&["c_pass", "x_c"]]),
            ],
        },
        "fan-out" => Contract {
            inputs: set(&["x"]),
            outputs: set(&["x1", "x2", "c"]),
            rows: vec![
                row(&[false], &[&["c"]], &[&["c", "x1"], &["c", "x2"]]),
                row(&[true], &[&["x1", "x2", "c"]], &[]),
            ],
        },
        "control-crossover" => Contract {
            inputs: set(&["c", "x"]),
            outputs: set(&["c'", "x'"]),
            rows: vec![
                row(&[false, false], &[], &[&["c'"]]),
                row(&[false, true], &[], &[&["c'"]]),
                row(&[true, false], &[&["c'"]], &[&["c'", "x'"]]),
                row(&[true, true], &[&["c'", "x'"]], &[]),
            ],
        },
        "dr-not" => dual_rail(&["x", "nx"], &["z", "nz"], 1, |v| match v {
            Some(&[x]) => dual_value(!x),
            _ => (vec![], vec![vec!["z"], vec!["nz"]]),
        }),
        "dr-and" => dual_rail(&["x", "nx", "y", "ny"], &["z", "nz"], 2, |v| match v {
            Some(&[x, y]) => dual_value(x && y),
            _ => (vec![], vec![vec!["z"], vec!["nz"]]),
        }),
        "dr-nand" => dual_rail(&["x", "nx", "y", "ny"], &["z", "nz"], 2, |v| match v {
            Some(&[x, y]) => dual_value(!(x && y)),
            _ => (vec![], vec![vec!["z"], vec!["nz"]]),
        }),
        "dr-fan-out" => dual_rail(&["x", "nx"], &["x1", "nx1", "x2", "nx2", "c1", "c2"], 1, |v| match v {
            Some(&[true]) => (
                vec![vec!["x1", "x2", "c1", "c2"]],
                vec![vec!["nx1", "c1", "c2"], vec!["nx2", "c1", "c2"]],
            ),
            Some(_) => (
                vec![vec!["nx1", "nx2", "c1", "c2"]],
                vec![vec!["x1", "c1", "c2"], vec!["x2", "c1", "c2"]],
            ),
            None => (
                vec![],
                vec![
                    vec!["x1", "c1", "c2"],
                    vec!["x2", "c1", "c2"],
                    vec!["nx1", "c1", "c2"],
                    vec!["nx2", "c1", "c2"],
                ],
            ),
        }),
        "dr-control-crossover" => {
            let mut rows = Vec::new();
            for c in [false, true] {
                for x in [false, true] {
                    let inputs = vec![c, x, !x];
                    let (good, bad) = if x { ("x'", "nx'") } else { ("nx'", "x'") };
                    rows.push(if c {
                        row(&inputs, &[&["c'", good]], &[&["c'", bad]])
                    } else {
                        row(&inputs, &[], &[&["c'"]])
                    });
                }
            }
            rows.push(row(&[true, false, false], &[], &[&["c'", "x'"], &["c'", "nx'"]]));
            rows.push(row(&[false, false, false], &[], &[&["c'"]]));
            Contract {
                inputs: set(&["c", "x", "nx"]),
                outputs: set(&["c'", "x'", "nx'"]),
                rows,
            }
        }
        _ => return Err(LibraryError::UnknownGadget(name.to_string())),
    })
}

fn dual_value(v: bool) -> (Vec<Vec<&'static str>>, Vec<Vec<&'static str>>) {
    if v {
        (vec![vec!["z"]], vec![vec!["nz"]])
    } else {
        (vec![vec!["nz"]], vec![vec!["z"]])
    }
}

/// Footprint of a library gadget.
pub fn gadget_footprint(name: &str) -> Result<Footprint, LibraryError> {
    let layout = |r: Result<Footprint, LayoutFailure>| {
        r.map_err(|source| LibraryError::Layout {
            gadget: name.to_string(),
            source,
        })
    };
    match name {
        "wire" => Ok(wire_footprint()),
        "shift" => Ok(shift_footprint()),
        "and" => Ok(and_footprint()),
        "or" => Ok(or_footprint()),
        "choice" => Ok(choice_footprint()),
        "half-crossover" => Ok(half_crossover_footprint()),
        "crossing" => Ok(crossing_footprint()),
        "axb" => layout(axb()),
        "fan-out" => layout(fan_out(false)),
        "control-crossover" => layout(control_crossover()),
        "dr-not" => layout(dr_not()),
        "dr-and" => layout(dr_gate(false)),
        "dr-nand" => layout(dr_gate(true)),
        "dr-fan-out" => layout(dr_fan_out()),
        "dr-control-crossover" => layout(dr_control_crossover()),
        _ => Err(LibraryError::UnknownGadget(name.to_string())),
    }
}

pub fn gadget(name: &str) -> Result<GadgetSpec, LibraryError> {
    Ok(GadgetSpec {
        name: name.to_string(),
        footprint: gadget_footprint(name)?,
        contract: gadget_contract(name)?,
    })
}

pub fn library() -> Vec<GadgetSpec> {
    GADGET_NAMES
        .iter()
        .map(|n| gadget(n).expect("library gadget builds"))
        .collect()
}

/// Signal carried into one side of a half-crossover, as a function of the
/// enclosing gadget's dual-rail inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Signal {
    /// Positive (`true`) or negative rail of an input signal.
    Rail(usize, bool),
    And(Box<Signal>, Box<Signal>),
}

impl Signal {
    pub fn eval(&self, values: &[bool]) -> bool {
        match self {
            Signal::Rail(k, positive) => values[*k] == *positive,
            Signal::And(a, b) => a.eval(values) && b.eval(values),
        }
    }
}

/// Why the two inputs of a half-crossover are never both true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// Both are functions of consistent dual-rail inputs.
    Rails { signals: usize, x: Signal, y: Signal },
    /// Both come out of a crossing piece, which never yields its two
    /// outputs together.
    Crossing,
}

/// Every half-crossover inside a library gadget, with its label and the
/// reason its inputs exclude each other.
pub fn half_crossover_uses(name: &str) -> Vec<(&'static str, Exclusion)> {
    use Signal::{And, Rail};
    let and = || And(Box::new(Rail(0, true)), Box::new(Rail(1, true)));
    match name {
        "axb" => vec![("hc", Exclusion::Crossing)],
        "control-crossover" | "dr-control-crossover" => vec![("axb/hc", Exclusion::Crossing)],
        "dr-not" => vec![(
            "hc",
            Exclusion::Rails {
                signals: 1,
                x: Rail(0, true),
                y: Rail(0, false),
            },
        )],
        "dr-and" => vec![
            (
                "hc-swap",
                Exclusion::Rails {
                    signals: 2,
                    x: Rail(0, true),
                    y: Rail(0, false),
                },
            ),
            (
                "hc-out",
                Exclusion::Rails {
                    signals: 2,
                    x: and(),
                    y: Rail(0, false),
                },
            ),
        ],
        "dr-nand" => vec![
            (
                "hc-swap",
                Exclusion::Rails {
                    signals: 2,
                    x: Rail(0, true),
                    y: Rail(0, false),
                },
            ),
            (
                "hc-out",
                Exclusion::Rails {
                    signals: 2,
                    x: and(),
                    y: Rail(1, false),
                },
            ),
        ],
        "dr-fan-out" => vec![(
            "hc",
            Exclusion::Rails {
                signals: 1,
                x: Rail(0, true),
                y: Rail(0, false),
            },
        )],
        _ => vec![],
    }
}

/// Checks that a half-crossover never sees two true inputs under the given
/// justification.
pub fn exclusion_holds(e: &Exclusion) -> bool {
    match e {
        Exclusion::Rails { signals, x, y } => assignments(*signals).all(|v| !(x.eval(&v) && y.eval(&v))),
        Exclusion::Crossing => gadget_contract("crossing")
            .map(|c| {
                c.rows.iter().all(|r| {
                    let has = |s: &[&str]| {
                        r.forbidden
                            .iter()
                            .any(|f| f.iter().map(String::as_str).eq(s.iter().copied()))
                    };
                    has(&["c_pass", "x_c"]) || has(&["x_c"]) || has(&["c_pass"])
                })
            })
            .unwrap_or(false),
    }
}

fn p(x: i32, y: i32) -> Position {
    Position::new(x, y)
}

fn axb() -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let hc = c.place(
        "hc",
        "half-crossover",
        &half_crossover_footprint(),
        Transform::IDENTITY,
        (0, 0),
    )?;
    let and = c.place("and", "and", &and_footprint(), Transform::IDENTITY, (12, -8))?;
    let or = c.place("or", "or", &or_footprint(), Transform::IDENTITY, (4, -16))?;
    c.expose("a", Input, c.port(hc, "x"), &[], p(-4, 4))?;
    c.expose("x", Input, c.port(hc, "y"), &[], p(4, 4))?;
    c.expose("b", Input, c.port(and, "b"), &[], p(16, 4))?;
    c.route("a'", c.port(hc, "x'"), c.port(and, "a"))?;
    c.route("x'", c.port(hc, "y'"), c.port(or, "a"))?;
    c.route("g", c.port(and, "z"), c.port(or, "b"))?;
    c.expose("z", Output, c.port(or, "z"), &[], p(6, -24))?;
    Ok(c.footprint())
}

/// Copies come from two choice gadgets; the control is
/// `x or (a and b)` where `a`, `b` are the choices' other outputs, so a
/// false `x` cannot keep both copies and the control.
fn fan_out(mirror: bool) -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let choice = choice_footprint();
    let ca = c.place("choice-a", "choice", &choice, Transform::IDENTITY, (4, -2))?;
    let cb = c.place("choice-b", "choice", &choice, Transform::IDENTITY, (10, -2))?;
    let and = c.place("and", "and", &and_footprint(), Transform::IDENTITY, (4, -14))?;
    let or = c.place("or", "or", &or_footprint(), Transform::IDENTITY, (0, -24))?;
    c.expose("x", Input, c.port(or, "a"), &[], p(0, 4))?;
    c.route("a", c.port(ca, "p"), c.port(and, "a"))?;
    c.route("b", c.port(cb, "p"), c.port(and, "b"))?;
    c.route("g", c.port(and, "z"), c.port(or, "b"))?;
    c.expose("x2", Output, c.port(cb, "n"), &[p(14, -2)], p(16, -32))?;
    c.expose("x1", Output, c.port(ca, "n"), &[p(4, 2), p(20, 2)], p(20, -32))?;
    c.expose("c", Output, c.port(or, "z"), &[], p(-4, -32))?;
    let fp = c.footprint();
    Ok(if mirror {
        fp.transformed(Transform::mirrored(), 0, 0)
    } else {
        fp
    })
}

/// The control jumps across the track in a crossing piece. With both
/// signals present it either passes as `c_pass` or lets the track through as
/// `x_c`. The outgoing copy `x'` comes from a choice whose other output must
/// back `c_pass`: `c' = x_c or (c_pass and a)`.
pub(crate) fn control_crossover() -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let cross = c.place("crossing", "crossing", &crossing_footprint(), Transform::rot(3), (4, 0))?;
    let axb = c.place("axb", "axb", &axb()?, Transform::IDENTITY, (-4, -14))?;
    let choice = c.place("choice", "choice", &choice_footprint(), Transform::IDENTITY, (16, -6))?;
    c.expose("x", Input, c.port(cross, "x"), &[], p(0, 4))?;
    c.expose("c", Input, c.port(cross, "c"), &[], p(22, -2))?;
    c.route("x_c", c.port(cross, "x_c"), c.port(axb, "x"))?;
    c.route("c_pass", c.port(cross, "c_pass"), c.port(axb, "a"))?;
    c.route("a", c.port(choice, "p"), c.port(axb, "b"))?;
    c.expose("x'", Output, c.port(choice, "n"), &[], p(20, -42))?;
    c.expose("c'", Output, c.port(axb, "z"), &[], p(-12, -38))?;
    Ok(c.footprint())
}

/// Swaps the rails with one half-crossover.
fn dr_not() -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let hc = c.place(
        "hc",
        "half-crossover",
        &half_crossover_footprint(),
        Transform::IDENTITY,
        (0, 0),
    )?;
    c.expose("x", Input, c.port(hc, "x"), &[], p(-4, 4))?;
    c.expose("nx", Input, c.port(hc, "y"), &[], p(4, 4))?;
    c.expose("z", Output, c.port(hc, "y'"), &[], p(4, -16))?;
    c.expose("nz", Output, c.port(hc, "x'"), &[], p(12, -16))?;
    Ok(c.footprint())
}

/// Conjunction on the positive rails and disjunction on the negative ones.
/// The first half-crossover swaps the `x` rails; the second moves the
/// conjunction past a negative rail that cannot be true at the same time.
fn dr_gate(nand: bool) -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let hc1 = c.place(
        "hc-swap",
        "half-crossover",
        &half_crossover_footprint(),
        Transform::IDENTITY,
        (0, 0),
    )?;
    let and = c.place("and", "and", &and_footprint(), Transform::IDENTITY, (12, -8))?;
    c.expose("x", Input, c.port(hc1, "x"), &[], p(-4, 4))?;
    c.expose("nx", Input, c.port(hc1, "y"), &[], p(4, 4))?;
    c.expose("y", Input, c.port(and, "b"), &[], p(16, 4))?;
    c.route("x", c.port(hc1, "x'"), c.port(and, "a"))?;
    if !nand {
        let hc2 = c.place(
            "hc-out",
            "half-crossover",
            &half_crossover_footprint(),
            Transform::mirrored(),
            (8, -16),
        )?;
        let or = c.place("or", "or", &or_footprint(), Transform::IDENTITY, (4, -32))?;
        c.expose("ny", Input, c.port(or, "b"), &[], p(20, 4))?;
        c.route("nx", c.port(hc1, "y'"), c.port(hc2, "y"))?;
        c.route("and", c.port(and, "z"), c.port(hc2, "x"))?;
        c.route("nx'", c.port(hc2, "y'"), c.port(or, "a"))?;
        c.expose("z", Output, c.port(hc2, "x'"), &[], p(-2, -40))?;
        c.expose("nz", Output, c.port(or, "z"), &[], p(6, -40))?;
    } else {
        let hc2 = c.place(
            "hc-out",
            "half-crossover",
            &half_crossover_footprint(),
            Transform::IDENTITY,
            (16, -16),
        )?;
        let or = c.place("or", "or", &or_footprint(), Transform::IDENTITY, (4, -32))?;
        c.expose("ny", Input, c.port(hc2, "y"), &[], p(20, 4))?;
        c.route("and", c.port(and, "z"), c.port(hc2, "x"))?;
        c.route("nx", c.port(hc1, "y'"), c.port(or, "a"))?;
        c.route("ny'", c.port(hc2, "y'"), c.port(or, "b"))?;
        c.expose("z", Output, c.port(or, "z"), &[], p(6, -40))?;
        c.expose("nz", Output, c.port(hc2, "x'"), &[], p(26, -40))?;
    }
    Ok(c.footprint())
}

/// A fan-out per rail; the inner copies swap places through a half-crossover.
fn dr_fan_out() -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let fx = c.place("fan-out-x", "fan-out", &fan_out(false)?, Transform::IDENTITY, (0, 0))?;
    let fnx = c.place("fan-out-nx", "fan-out", &fan_out(true)?, Transform::IDENTITY, (56, 0))?;
    let hc = c.place(
        "hc",
        "half-crossover",
        &half_crossover_footprint(),
        Transform::IDENTITY,
        (24, -40),
    )?;
    c.expose("x", Input, c.port(fx, "x"), &[], p(0, 8))?;
    c.expose("nx", Input, c.port(fnx, "x"), &[], p(56, 8))?;
    c.route("x-b", c.port(fx, "x1"), c.port(hc, "x"))?;
    c.route("nx-a", c.port(fnx, "x1"), c.port(hc, "y"))?;
    c.expose("x1", Output, c.port(fx, "x2"), &[], p(16, -56))?;
    c.expose("nx1", Output, c.port(hc, "y'"), &[], p(28, -56))?;
    c.expose("x2", Output, c.port(hc, "x'"), &[], p(36, -56))?;
    c.expose("nx2", Output, c.port(fnx, "x2"), &[], p(44, -56))?;
    c.expose("c1", Output, c.port(fx, "c"), &[], p(-8, -32))?;
    c.expose("c2", Output, c.port(fnx, "c"), &[], p(64, -32))?;
    Ok(c.footprint())
}

/// The control crosses the negative rail, then the positive one.
pub(crate) fn dr_control_crossover() -> Result<Footprint, LayoutFailure> {
    let mut c = Canvas::new();
    let cc = control_crossover()?;
    let cx = c.place("cc-x", "control-crossover", &cc, Transform::IDENTITY, (0, 0))?;
    let cnx = c.place("cc-nx", "control-crossover", &cc, Transform::IDENTITY, (40, 36))?;
    c.expose("c", Input, c.port(cnx, "c"), &[], p(66, 34))?;
    c.expose("x", Input, c.port(cx, "x"), &[], p(0, 44))?;
    c.expose("nx", Input, c.port(cnx, "x"), &[], p(40, 44))?;
    c.route("c-mid", c.port(cnx, "c'"), c.port(cx, "c"))?;
    c.expose("c'", Output, c.port(cx, "c'"), &[], p(-16, -38))?;
    c.expose("x'", Output, c.port(cx, "x'"), &[], p(20, -50))?;
    c.expose("nx'", Output, c.port(cnx, "x'"), &[], p(60, -50))?;
    Ok(c.footprint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reachability::Limits;
    use crate::reduction::gadget::verify_gadget;

    pub(crate) fn check(name: &str) {
        let spec = gadget(name).unwrap();
        let report = verify_gadget(&spec, Limits::default()).unwrap();
        assert!(
            report.passed(),
            "{}\n{}\n{:?}",
            report,
            spec.footprint.to_art(),
            report.rows
        );
    }

    #[test]
    #[ignore]
    fn show() {
        let name = std::env::var("GADGET").unwrap();
        let spec = gadget(&name).unwrap();
        println!("{}", spec.footprint.to_art());
        let t = std::time::Instant::now();
        let report = verify_gadget(&spec, Limits::default()).unwrap();
        println!("{report} {:?}", t.elapsed());
        for r in &report.rows {
            println!("{:?} {} {:?}", r.inputs, r.explored, r.failures);
        }
    }

    #[test]
    fn primitives_verify() {
        for name in ["wire", "shift", "and", "or", "choice", "half-crossover", "crossing"] {
            check(name);
        }
    }

    #[test]
    fn and_with_missing_peg_fails() {
        let mut spec = gadget("and").unwrap();
        let victim = *spec.footprint.cells.iter().find(|(_, &v)| v).unwrap().0;
        spec.footprint.cells.insert(victim, false);
        let report = verify_gadget(&spec, Limits::default()).unwrap();
        assert!(!report.passed());
        assert!(!report.rows[3].failures.is_empty());
    }
}
