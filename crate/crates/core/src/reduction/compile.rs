//! Circuit compilation: dual-rail signals laid out as vertical tracks,
//! one gadget per stage, control wires pushed to the two sides and
//! conjoined with the output at the bottom.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, Configuration, Position};
use crate::moves::Jump;
use crate::reachability::{
    config_bits, forward_net, replay_path, search_net, search_target, Limits, Literal, Net, ReachError,
};
use crate::reduction::circuit::{validate_circuit, CircuitGraph, GateOp, Violation};
use crate::reduction::gadget::{Footprint, Port, Transform};
use crate::reduction::layout::{Canvas, LayoutFailure, RoutedWire};
use crate::reduction::library::{
    and_footprint, choice_footprint, dr_control_crossover, exclusion_holds, gadget_footprint, half_crossover_uses,
    LibraryError,
};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("invalid circuit: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("layout failure: {0}")]
    Layout(#[from] LayoutFailure),
    #[error(transparent)]
    Library(#[from] LibraryError),
    #[error("half-crossover lint failed in {instance}/{site}")]
    Lint { instance: String, site: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Input,
    Gate,
    FanOut,
    ControlCrossing,
    Conjunction,
}

/// Where a placed gadget comes from in the circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub instance: String,
    pub gadget: String,
    pub role: Role,
    /// Circuit vertex the gadget implements or copies.
    pub vertex: Option<String>,
    /// Circuit edge (or control wire) involved, for crossings and gates.
    pub edges: Vec<String>,
    pub transform: Transform,
    pub offset: Position,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintRecord {
    pub instance: String,
    pub site: String,
    pub ok: bool,
}

/// What a wire or gadget output carries in a staged run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Carrier {
    Rail { vertex: String, positive: bool },
    Control,
}

/// Build order of the layout, replayed by [`staged_witness`].
#[derive(Clone, Debug)]
pub(crate) enum Step {
    Wire {
        wire: usize,
        carrier: Carrier,
    },
    Gadget {
        cells: Vec<Position>,
        outputs: Vec<(Position, Carrier)>,
    },
}

#[derive(Clone, Debug)]
pub struct CompiledInstance {
    pub board: Board,
    pub start: Configuration,
    pub target: Position,
    pub footprint: Footprint,
    pub provenance: Vec<ProvenanceEntry>,
    pub wires: Vec<RoutedWire>,
    pub lint: Vec<LintRecord>,
    pub(crate) steps: Vec<Step>,
}

impl CompiledInstance {
    pub fn peg_count(&self) -> usize {
        self.footprint.peg_count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Rail {
        vertex: String,
        copy: usize,
        positive: bool,
    },
    Control,
}

#[derive(Clone, Debug)]
struct Item {
    kind: Kind,
    label: String,
    end: Position,
}

fn carrier(kind: &Kind) -> Carrier {
    match kind {
        Kind::Rail { vertex, positive, .. } => Carrier::Rail {
            vertex: vertex.clone(),
            positive: *positive,
        },
        Kind::Control => Carrier::Control,
    }
}

impl Item {
    fn rail_of(&self) -> Option<(&str, usize, bool)> {
        match &self.kind {
            Kind::Rail { vertex, copy, positive } => Some((vertex, *copy, *positive)),
            Kind::Control => None,
        }
    }
}

/// One output of a stage: port name, the item it becomes.
struct Out {
    port: &'static str,
    kind: Kind,
    label: String,
}

struct Compiler {
    canvas: Canvas,
    items: Vec<Item>,
    y_front: i32,
    provenance: Vec<ProvenanceEntry>,
    copies: std::collections::HashMap<String, usize>,
    controls: usize,
    steps: Vec<Step>,
}

fn even_up(v: i32) -> i32 {
    v + v.rem_euclid(2)
}

fn rename(fp: &Footprint, pairs: &[(&str, &str)]) -> Footprint {
    let mut out = fp.clone();
    for port in &mut out.ports {
        if let Some((_, to)) = pairs.iter().find(|(from, _)| *from == port.name) {
            port.name = to.to_string();
        }
    }
    out
}

impl Compiler {
    fn new() -> Self {
        Compiler {
            canvas: Canvas::new(),
            items: Vec::new(),
            y_front: 0,
            provenance: Vec::new(),
            copies: Default::default(),
            controls: 0,
            steps: Vec::new(),
        }
    }

    fn wire(
        &mut self,
        label: &str,
        kind: &Kind,
        from: Position,
        via: &[Position],
        to: Position,
    ) -> Result<(), CompileError> {
        self.canvas.route_via(label, from, via, to)?;
        self.steps.push(Step::Wire {
            wire: self.canvas.wires().len() - 1,
            carrier: carrier(kind),
        });
        Ok(())
    }

    fn gadget_step(&mut self, fp: &Footprint, offset: (i32, i32), placed: usize, outs: &[(&str, &Kind)]) {
        let outputs = outs
            .iter()
            .map(|(port, kind)| (self.canvas.port(placed, port), carrier(kind)))
            .collect();
        let cells = fp
            .cells
            .keys()
            .map(|p| Position::new(p.x + offset.0, p.y + offset.1))
            .collect();
        self.steps.push(Step::Gadget { cells, outputs });
    }

    fn rail(&mut self, vertex: &str, fresh: bool) -> (Kind, Kind, String) {
        let n = self.copies.entry(vertex.to_string()).or_insert(0);
        if fresh {
            *n += 1;
        }
        let copy = *n;
        (
            Kind::Rail {
                vertex: vertex.to_string(),
                copy,
                positive: true,
            },
            Kind::Rail {
                vertex: vertex.to_string(),
                copy,
                positive: false,
            },
            format!("{vertex}#{copy}"),
        )
    }

    /// Replaces `items[at..at + ports.len()]` by the outputs of a gadget
    /// placed below the frontier. Every other item continues straight down,
    /// shifting right past the gadget when needed.
    #[allow(clippy::too_many_arguments)]
    fn stage(
        &mut self,
        at: usize,
        ports: &[&str],
        gadget: &str,
        fp: &Footprint,
        transform: Transform,
        outs: Vec<Out>,
        role: Role,
        vertex: Option<String>,
    ) -> Result<(), CompileError> {
        let w = ports.len();
        let (lo, hi) = fp.bounds();
        let port = |name: &str| -> &Port { fp.port(name).unwrap_or_else(|| panic!("{gadget} lacks {name}")) };
        let mut ox = self.items[at].end.x - port(ports[0]).pos.x;
        if at > 0 {
            ox = ox.max(self.items[at - 1].end.x + 8 - lo.x);
        }
        ox = even_up(ox);
        let mut next = even_up(hi.x + ox + 6);
        let right_x: Vec<i32> = self.items[at + w..]
            .iter()
            .map(|it| {
                let x = it.end.x.max(next);
                next = x + 4;
                x
            })
            .collect();
        // target column of every item that moves in the top band
        let mut moves: Vec<(usize, i32, i32)> = Vec::new();
        for (k, &name) in ports.iter().enumerate() {
            let p = port(name).pos;
            let x1 = if p.y == hi.y {
                p.x + ox
            } else if p.x == hi.x {
                p.x + ox + 2
            } else {
                p.x + ox - 2
            };
            moves.push((at + k, self.items[at + k].end.x, x1));
        }
        for (k, &x1) in right_x.iter().enumerate() {
            moves.push((at + w + k, self.items[at + w + k].end.x, x1));
        }
        let mut rightward: Vec<&(usize, i32, i32)> = moves.iter().filter(|m| m.2 > m.1).collect();
        rightward.sort_by_key(|m| std::cmp::Reverse(m.1));
        let mut leftward: Vec<&(usize, i32, i32)> = moves.iter().filter(|m| m.2 < m.1).collect();
        leftward.sort_by_key(|m| m.1);
        let mut row = vec![None; self.items.len()];
        for (k, m) in rightward.iter().chain(leftward.iter()).enumerate() {
            row[m.0] = Some(self.y_front - 2 * (k as i32 + 1));
        }
        let bands = rightward.len() + leftward.len();
        let oy = self.y_front - 2 * (bands as i32 + 1) - 2 - hi.y;
        let y_new = lo.y + oy - 4;
        let id = format!("{gadget}:{}", self.provenance.len());
        let placed = self.canvas.place(&id, gadget, fp, Transform::IDENTITY, (ox, oy))?;
        self.provenance.push(ProvenanceEntry {
            instance: id.clone(),
            gadget: gadget.to_string(),
            role,
            vertex,
            edges: self.items[at..at + w].iter().map(|i| i.label.clone()).collect(),
            transform,
            offset: Position::new(ox, oy),
        });
        let mut new_items = Vec::new();
        let left = self.items[..at].to_vec();
        for it in left {
            let to = Position::new(it.end.x, y_new);
            self.wire(&it.label, &it.kind, it.end, &[], to)?;
            new_items.push(Item { end: to, ..it });
        }
        for (k, &name) in ports.iter().enumerate() {
            let it = self.items[at + k].clone();
            let dst = self.canvas.port(placed, name);
            let (_, x0, x1) = moves[k];
            let mut via = Vec::new();
            if let Some(r) = row[at + k] {
                via.push(Position::new(x0, r));
                via.push(Position::new(x1, r));
            }
            if dst.y != hi.y + oy {
                via.push(Position::new(x1, dst.y));
            }
            self.wire(&it.label, &it.kind, it.end, &via, dst)?;
        }
        let step_outs: Vec<(&str, &Kind)> = outs.iter().map(|o| (o.port, &o.kind)).collect();
        self.gadget_step(fp, (ox, oy), placed, &step_outs);
        let mut produced: Vec<Item> = Vec::new();
        for o in outs {
            let p = self.canvas.port(placed, o.port);
            let (via, to) = if p.y == lo.y + oy {
                (vec![], Position::new(p.x, y_new))
            } else {
                let side = if p.x == lo.x + ox { -2 } else { 2 };
                (vec![Position::new(p.x + side, p.y)], Position::new(p.x + side, y_new))
            };
            self.wire(&o.label, &o.kind, p, &via, to)?;
            produced.push(Item {
                kind: o.kind,
                label: o.label,
                end: to,
            });
        }
        produced.sort_by_key(|i| i.end.x);
        new_items.extend(produced);
        let right = self.items[at + w..].to_vec();
        for (k, it) in right.into_iter().enumerate() {
            let to = Position::new(right_x[k], y_new);
            let via = match row[at + w + k] {
                Some(r) => vec![Position::new(it.end.x, r), Position::new(right_x[k], r)],
                None => vec![],
            };
            self.wire(&it.label, &it.kind, it.end, &via, to)?;
            new_items.push(Item { end: to, ..it });
        }
        self.items = new_items;
        self.y_front = y_new;
        Ok(())
    }

    fn place_inputs(&mut self, inputs: &[String]) -> Result<(), CompileError> {
        let choice = choice_footprint();
        for (i, v) in inputs.iter().enumerate() {
            let t = Transform::rot(3);
            let ox = 12 * i as i32 + 4;
            let id = format!("choice:{}", self.provenance.len());
            let placed = self.canvas.place(&id, "choice", &choice, t, (ox, 0))?;
            self.provenance.push(ProvenanceEntry {
                instance: id,
                gadget: "choice".into(),
                role: Role::Input,
                vertex: Some(v.clone()),
                edges: vec![],
                transform: t,
                offset: Position::new(ox, 0),
            });
            let (pos, neg, label) = self.rail(v, true);
            self.gadget_step(
                &choice.transformed(t, 0, 0),
                (ox, 0),
                placed,
                &[("p", &pos), ("n", &neg)],
            );
            for (port, kind, sign) in [("p", pos, "+"), ("n", neg, "-")] {
                let from = self.canvas.port(placed, port);
                let to = Position::new(from.x, -4);
                let label = format!("{label}{sign}");
                self.wire(&label, &kind, from, &[], to)?;
                self.items.push(Item { kind, label, end: to });
            }
        }
        self.y_front = -4;
        Ok(())
    }

    fn track_at(&self, i: usize) -> Option<(&str, usize)> {
        let a = self.items.get(i)?.rail_of()?;
        let b = self.items.get(i + 1)?.rail_of()?;
        (a.0 == b.0 && a.1 == b.1 && a.2 && !b.2).then_some((a.0, a.1))
    }

    fn fresh_control(&mut self) -> String {
        self.controls += 1;
        format!("ctl{}", self.controls)
    }

    fn fan_out(&mut self, vertex: &str) -> Result<(), CompileError> {
        let at = (0..self.items.len())
            .rev()
            .find(|&i| self.track_at(i).map(|t| t.0) == Some(vertex))
            .expect("vertex has a track");
        let fp = gadget_footprint("dr-fan-out")?;
        let (p1, n1, l1) = self.rail(vertex, false);
        let (p2, n2, l2) = self.rail(vertex, true);
        let (c1, c2) = (self.fresh_control(), self.fresh_control());
        let outs = vec![
            Out {
                port: "c1",
                kind: Kind::Control,
                label: c1,
            },
            Out {
                port: "x1",
                kind: p1,
                label: format!("{l1}+"),
            },
            Out {
                port: "nx1",
                kind: n1,
                label: format!("{l1}-"),
            },
            Out {
                port: "x2",
                kind: p2,
                label: format!("{l2}+"),
            },
            Out {
                port: "nx2",
                kind: n2,
                label: format!("{l2}-"),
            },
            Out {
                port: "c2",
                kind: Kind::Control,
                label: c2,
            },
        ];
        self.stage(
            at,
            &["x", "nx"],
            "dr-fan-out",
            &fp,
            Transform::IDENTITY,
            outs,
            Role::FanOut,
            Some(vertex.into()),
        )?;
        self.cross_right(at + 5)?;
        self.cross_left(at)
    }

    fn cross_left(&mut self, mut at: usize) -> Result<(), CompileError> {
        let fp = dr_control_crossover()?;
        while at >= 2 && self.track_at(at - 2).is_some() {
            let ctl = self.items[at].label.clone();
            let (x, nx) = (self.items[at - 2].clone(), self.items[at - 1].clone());
            let outs = vec![
                Out {
                    port: "c'",
                    kind: Kind::Control,
                    label: ctl,
                },
                Out {
                    port: "x'",
                    kind: x.kind,
                    label: x.label,
                },
                Out {
                    port: "nx'",
                    kind: nx.kind,
                    label: nx.label,
                },
            ];
            let vertex = self.track_at(at - 2).map(|t| t.0.to_string());
            self.stage(
                at - 2,
                &["x", "nx", "c"],
                "dr-control-crossover",
                &fp,
                Transform::IDENTITY,
                outs,
                Role::ControlCrossing,
                vertex,
            )?;
            at -= 2;
        }
        Ok(())
    }

    fn cross_right(&mut self, mut at: usize) -> Result<(), CompileError> {
        let t = Transform::mirrored();
        let fp = rename(
            &dr_control_crossover()?.transformed(t, 0, 0),
            &[("x", "nx"), ("nx", "x"), ("x'", "nx'"), ("nx'", "x'")],
        );
        while self.track_at(at + 1).is_some() {
            let ctl = self.items[at].label.clone();
            let (x, nx) = (self.items[at + 1].clone(), self.items[at + 2].clone());
            let outs = vec![
                Out {
                    port: "x'",
                    kind: x.kind,
                    label: x.label,
                },
                Out {
                    port: "nx'",
                    kind: nx.kind,
                    label: nx.label,
                },
                Out {
                    port: "c'",
                    kind: Kind::Control,
                    label: ctl,
                },
            ];
            let vertex = self.track_at(at + 1).map(|t| t.0.to_string());
            self.stage(
                at,
                &["c", "x", "nx"],
                "dr-control-crossover",
                &fp,
                t,
                outs,
                Role::ControlCrossing,
                vertex,
            )?;
            at += 2;
        }
        Ok(())
    }

    fn nand(&mut self, id: &str, a: &str, b: &str) -> Result<(), CompileError> {
        let at = (0..self.items.len())
            .find(|&i| match (self.track_at(i), self.track_at(i + 2)) {
                (Some(s), Some(t)) => (s.0 == a && t.0 == b) || (s.0 == b && t.0 == a),
                _ => false,
            })
            .ok_or_else(|| LayoutFailure::Unroutable {
                net: format!("{a}->{id}"),
                reason: format!("no adjacent tracks of {a} and {b}"),
            })?;
        let fp = gadget_footprint("dr-nand")?;
        let (p, n, l) = self.rail(id, true);
        let outs = vec![
            Out {
                port: "z",
                kind: p,
                label: format!("{l}+"),
            },
            Out {
                port: "nz",
                kind: n,
                label: format!("{l}-"),
            },
        ];
        self.stage(
            at,
            &["x", "nx", "y", "ny"],
            "dr-nand",
            &fp,
            Transform::IDENTITY,
            outs,
            Role::Gate,
            Some(id.into()),
        )
    }

    /// Conjoins the output rail with every control, innermost first.
    fn finish(&mut self, sink_input: &str) -> Result<Position, CompileError> {
        let at = (0..self.items.len())
            .find(|&i| self.track_at(i).map(|t| t.0) == Some(sink_input))
            .expect("sink input has a track");
        let out = self.items[at].label.clone();
        // unused rails and the negative output rail end here
        let keep: Vec<Item> = self
            .items
            .iter()
            .filter(|it| it.kind == Kind::Control || it.label == out)
            .cloned()
            .collect();
        self.items = keep;
        let and = and_footprint();
        loop {
            let r = self.items.iter().position(|it| it.label == out).unwrap();
            let (at, ports) = if r > 0 {
                (r - 1, ["a", "b"])
            } else if r + 1 < self.items.len() {
                (r, ["a", "b"])
            } else {
                return Ok(self.items[r].end);
            };
            let kind = self.items[r].kind.clone();
            let ctl = if r > 0 { &self.items[r - 1] } else { &self.items[r + 1] };
            let edges = ctl.label.clone();
            let outs = vec![Out {
                port: "z",
                kind,
                label: out.clone(),
            }];
            self.stage(
                at,
                &ports,
                "and",
                &and,
                Transform::IDENTITY,
                outs,
                Role::Conjunction,
                Some(edges),
            )?;
        }
    }
}

/// Compiles a valid circuit into a reachability instance whose target can
/// receive a peg exactly when the circuit is satisfiable.
pub fn compile_circuit(g: &CircuitGraph) -> Result<CompiledInstance, CompileError> {
    validate_circuit(g).map_err(CompileError::Invalid)?;
    let mut c = Compiler::new();
    c.place_inputs(&g.inputs)?;
    for v in &g.inputs {
        for _ in 1..g.out_degree(v) {
            c.fan_out(v)?;
        }
    }
    let order = g.topological_gates().expect("validated circuit is acyclic");
    let mut sink_input = None;
    for gate in order {
        match gate.op {
            GateOp::Nand => {
                c.nand(&gate.id, &gate.inputs[0], &gate.inputs[1])?;
                for _ in 1..g.out_degree(&gate.id) {
                    c.fan_out(&gate.id)?;
                }
            }
            GateOp::Sink => sink_input = Some(gate.inputs[0].clone()),
        }
    }
    let target = c.finish(&sink_input.expect("validated circuit has a sink"))?;
    let lint = lint(&c.provenance);
    if let Some(bad) = lint.iter().find(|l| !l.ok) {
        return Err(CompileError::Lint {
            instance: bad.instance.clone(),
            site: bad.site.clone(),
        });
    }
    let footprint = c.canvas.footprint();
    let board = Board::new(footprint.cells.keys().copied(), [], target).expect("canvas cells are distinct");
    let start = Configuration::from_pegs(&board, footprint.pegs()).expect("pegs are cells");
    Ok(CompiledInstance {
        board,
        start,
        target,
        footprint,
        provenance: c.provenance,
        wires: c.canvas.wires().to_vec(),
        lint,
        steps: c.steps,
    })
}

/// Half-crossover usage rule: at every half-crossover of every placed
/// gadget at least one input is false.
pub fn lint(provenance: &[ProvenanceEntry]) -> Vec<LintRecord> {
    provenance
        .iter()
        .flat_map(|p| {
            half_crossover_uses(&p.gadget)
                .into_iter()
                .map(move |(site, e)| LintRecord {
                    instance: p.instance.clone(),
                    site: site.to_string(),
                    ok: exclusion_holds(&e),
                })
        })
        .collect()
}

/// Outcome of a staged run for one input assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedRun {
    /// Full jump sequence, checked by replay on the whole board, when the
    /// target was reached.
    pub witness: Option<Vec<Jump>>,
    /// Index of the first step whose local goal could not be met.
    pub stalled_at: Option<usize>,
    pub explored: u64,
}

/// Plays the compiled board one component at a time: every wire carrying
/// a true signal is pushed to its end, and every gadget is driven to the
/// output set its contract requires for the signals the circuit computes
/// under `assignment`. Each local goal is an exact search restricted to
/// the moves inside that component.
pub fn staged_witness(
    inst: &CompiledInstance,
    g: &CircuitGraph,
    assignment: &[bool],
    limits: Limits,
) -> Result<StagedRun, ReachError> {
    let values = g.evaluate(assignment);
    let truth = |c: &Carrier| match c {
        Carrier::Rail { vertex, positive } => values[vertex] == *positive,
        Carrier::Control => true,
    };
    let (net, jumps) = forward_net(&inst.board);
    let start = config_bits(&inst.start);
    let mut state = start.clone();
    let mut path: Vec<usize> = Vec::new();
    let mut explored = 0;
    let index = |p: &Position| inst.board.index_of(*p).expect("component cell on board");
    for (k, step) in inst.steps.iter().enumerate() {
        let (region, goal): (Vec<usize>, Vec<usize>) = match step {
            Step::Wire { wire, carrier } => {
                if !truth(carrier) {
                    continue;
                }
                let st = &inst.wires[*wire].stations;
                let mut cells: Vec<usize> = st.iter().map(index).collect();
                for w in st.windows(2) {
                    cells.push(index(&Position::new((w[0].x + w[1].x) / 2, (w[0].y + w[1].y) / 2)));
                }
                (cells, vec![index(st.last().unwrap())])
            }
            Step::Gadget { cells, outputs } => {
                let goal: Vec<usize> = outputs
                    .iter()
                    .filter(|(_, c)| truth(c))
                    .map(|(p, _)| index(p))
                    .collect();
                if goal.is_empty() {
                    continue;
                }
                (cells.iter().map(index).collect(), goal)
            }
        };
        let mut inside = vec![false; inst.board.len()];
        for &c in &region {
            inside[c] = true;
        }
        let local: Vec<usize> = (0..net.len())
            .filter(|&t| {
                let tr = &net.transitions()[t];
                tr.full.iter().chain(&tr.empty).all(|&c| inside[c])
            })
            .collect();
        let sub = Net::new(
            inst.board.len(),
            local.iter().map(|&t| net.transitions()[t].clone()).collect(),
        );
        let lits: Vec<Literal> = goal.into_iter().map(Literal::Full).collect();
        let r = search_net(&sub, &state, &lits, limits)?;
        explored += r.explored;
        match (r.path, r.final_state) {
            (Some(p), Some(s)) => {
                path.extend(p.into_iter().map(|t| local[t]));
                state = s;
            }
            _ => {
                return Ok(StagedRun {
                    witness: None,
                    stalled_at: Some(k),
                    explored,
                })
            }
        }
    }
    let end = replay_path(&net, &start, &path).expect("staged moves replay on the full board");
    let t = inst.board.index_of(inst.target).expect("target on board");
    let reached = end[t / 64] >> (t % 64) & 1 == 1;
    Ok(StagedRun {
        witness: reached.then(|| path.iter().map(|&t| jumps[t]).collect()),
        stalled_at: None,
        explored,
    })
}

/// Target reachability of a compiled board, decided by exact search when
/// it fits the budget and by staged runs over every input assignment
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    /// Exact answer, `None` when the search ran out of budget.
    pub exact: Option<bool>,
    pub exact_explored: u64,
    /// Assignments whose staged run reached the target.
    pub staged_reaching: Vec<Vec<bool>>,
    /// Verified jump sequence for the first reaching assignment.
    #[serde(skip)]
    pub witness: Option<Vec<Jump>>,
}

impl Decision {
    /// Exact answer when available, else whether some staged run reached
    /// the target.
    pub fn reachable(&self) -> bool {
        self.exact.unwrap_or(!self.staged_reaching.is_empty())
    }
}

pub fn decide(inst: &CompiledInstance, g: &CircuitGraph, exact: Limits, local: Limits) -> Result<Decision, ReachError> {
    let (answer, explored, mut witness) = match search_target(&inst.board, &inst.start, inst.target, exact) {
        Ok(r) => (Some(r.reachable), r.explored, r.witness),
        Err(ReachError::StateBudgetExhausted { explored }) => (None, explored, None),
        Err(e) => return Err(e),
    };
    let n = g.inputs.len();
    let mut staged_reaching = Vec::new();
    for m in 0..1u64 << n {
        let a: Vec<bool> = (0..n).map(|k| m >> k & 1 == 1).collect();
        let run = staged_witness(inst, g, &a, local)?;
        if let Some(w) = run.witness {
            witness.get_or_insert(w);
            staged_reaching.push(a);
        }
    }
    Ok(Decision {
        exact: answer,
        exact_explored: explored,
        staged_reaching,
        witness,
    })
}
