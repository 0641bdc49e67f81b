//! Planar NAND circuits: the input format, structural validation and brute
//! force satisfiability.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateOp {
    Nand,
    Sink,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub id: String,
    pub op: GateOp,
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
}

/// A circuit as read from JSON. Edges are implied by the gate inputs; the
/// `k`-th input of gate `g` fed by `v` is the edge named `v->g#k`. The
/// optional rotation system lists, per vertex, its incident edges in cyclic
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitGraph {
    pub inputs: Vec<String>,
    pub gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rotation: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    DuplicateVertex { id: String },
    UnknownVertex { id: String, referenced_by: String },
    NandInDegree { id: String, in_degree: usize },
    NandOutDegree { id: String },
    InputHasInEdges { id: String },
    SinkCount { count: usize },
    SinkInDegree { id: String, in_degree: usize },
    SinkHasOutEdges { id: String },
    SinkMismatch { declared: String },
    Cycle { vertices: Vec<String> },
    RotationMissing { vertex: String, edge: String },
    RotationExtra { vertex: String, edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex { id } => write!(f, "vertex {id} is defined twice"),
            Violation::UnknownVertex { id, referenced_by } => {
                write!(f, "{referenced_by} refers to unknown vertex {id}")
            }
            Violation::NandInDegree { id, in_degree } => {
                write!(
                    f,
                    "NAND {id} has in-degree {in_degree}; NAND vertices need in-degree exactly 2"
                )
            }
            Violation::NandOutDegree { id } => write!(f, "NAND {id} needs out-degree at least 1"),
            Violation::InputHasInEdges { id } => write!(f, "input {id} has incoming edges"),
            Violation::SinkCount { count } => write!(f, "circuit has {count} sinks; exactly one is required"),
            Violation::SinkInDegree { id, in_degree } => {
                write!(f, "sink {id} has in-degree {in_degree}; 1 is required")
            }
            Violation::SinkHasOutEdges { id } => write!(f, "sink {id} has outgoing edges"),
            Violation::SinkMismatch { declared } => write!(f, "declared sink {declared} is not the sink vertex"),
            Violation::Cycle { vertices } => write!(f, "cycle through {}", vertices.join(", ")),
            Violation::RotationMissing { vertex, edge } => write!(f, "rotation of {vertex} lacks edge {edge}"),
            Violation::RotationExtra { vertex, edge } => {
                write!(f, "rotation of {vertex} lists {edge} once too often or wrongly")
            }
        }
    }
}

impl CircuitGraph {
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for g in &self.gates {
            for (k, src) in g.inputs.iter().enumerate() {
                out.push(Edge {
                    name: format!("{src}->{}#{k}", g.id),
                    from: src.clone(),
                    to: g.id.clone(),
                });
            }
        }
        out
    }

    fn gate(&self, id: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.id == id)
    }

    /// The sink vertex, when there is exactly one.
    pub fn sink_gate(&self) -> Option<&Gate> {
        let mut sinks = self.gates.iter().filter(|g| g.op == GateOp::Sink);
        match (sinks.next(), sinks.next()) {
            (Some(s), None) => Some(s),
            _ => None,
        }
    }

    pub fn out_degree(&self, id: &str) -> usize {
        self.gates
            .iter()
            .map(|g| g.inputs.iter().filter(|s| *s == id).count())
            .sum()
    }

    /// Gates in an order where every gate follows its inputs, or `None` if
    /// the gates contain a cycle.
    pub fn topological_gates(&self) -> Option<Vec<&Gate>> {
        let mut done: HashSet<&str> = self.inputs.iter().map(String::as_str).collect();
        let mut order = Vec::new();
        let mut pending: Vec<&Gate> = self.gates.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for g in pending {
                if g.inputs.iter().all(|s| done.contains(s.as_str())) {
                    done.insert(&g.id);
                    order.push(g);
                } else {
                    rest.push(g);
                }
            }
            if rest.len() == before {
                return None;
            }
            pending = rest;
        }
        Some(order)
    }

    /// Value of every vertex under an input assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> HashMap<String, bool> {
        let mut val: HashMap<String, bool> = self.inputs.iter().cloned().zip(assignment.iter().copied()).collect();
        for g in self.topological_gates().expect("circuit is acyclic") {
            let ins: Vec<bool> = g.inputs.iter().map(|s| val[s]).collect();
            let v = match g.op {
                GateOp::Nand => !ins.iter().all(|&b| b),
                GateOp::Sink => ins[0],
            };
            val.insert(g.id.clone(), v);
        }
        val
    }

    /// Output of the circuit: the value entering the sink.
    pub fn output(&self, assignment: &[bool]) -> bool {
        let sink = self.sink_gate().expect("circuit has one sink");
        self.evaluate(assignment)[&sink.id]
    }

    /// First satisfying assignment in counting order, by exhaustion.
    pub fn satisfying_assignment(&self) -> Option<Vec<bool>> {
        let n = self.inputs.len();
        (0..1u64 << n)
            .map(|m| (0..n).map(|k| m >> k & 1 == 1).collect::<Vec<bool>>())
            .find(|a| self.output(a))
    }
}

/// Structural checks: unique ids, degrees, one sink, acyclicity and, when a
/// rotation system is given, that it lists exactly the incident edges.
pub fn validate_circuit(g: &CircuitGraph) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    let mut seen = HashSet::new();
    for id in g.inputs.iter().chain(g.gates.iter().map(|x| &x.id)) {
        if !seen.insert(id.as_str()) {
            v.push(Violation::DuplicateVertex { id: id.clone() });
        }
    }
    for gate in &g.gates {
        for src in &gate.inputs {
            if !seen.contains(src.as_str()) {
                v.push(Violation::UnknownVertex {
                    id: src.clone(),
                    referenced_by: gate.id.clone(),
                });
            }
        }
        match gate.op {
            GateOp::Nand => {
                if gate.inputs.len() != 2 {
                    v.push(Violation::NandInDegree {
                        id: gate.id.clone(),
                        in_degree: gate.inputs.len(),
                    });
                }
                if g.out_degree(&gate.id) == 0 {
                    v.push(Violation::NandOutDegree { id: gate.id.clone() });
                }
            }
            GateOp::Sink => {
                if gate.inputs.len() != 1 {
                    v.push(Violation::SinkInDegree {
                        id: gate.id.clone(),
                        in_degree: gate.inputs.len(),
                    });
                }
                if g.out_degree(&gate.id) > 0 {
                    v.push(Violation::SinkHasOutEdges { id: gate.id.clone() });
                }
            }
        }
    }
    let sinks = g.gates.iter().filter(|x| x.op == GateOp::Sink).count();
    if sinks != 1 {
        v.push(Violation::SinkCount { count: sinks });
    }
    if let (Some(declared), Some(s)) = (&g.sink, g.sink_gate()) {
        if *declared != s.id {
            v.push(Violation::SinkMismatch {
                declared: declared.clone(),
            });
        }
    }
    for i in g.inputs.iter().filter(|i| g.gate(i).is_some()) {
        v.push(Violation::InputHasInEdges { id: i.clone() });
    }
    if v.iter().all(|x| !matches!(x, Violation::UnknownVertex { .. })) && g.topological_gates().is_none() {
        let done: HashSet<&str> = g.topological_gates_partial().into_iter().collect();
        v.push(Violation::Cycle {
            vertices: g
                .gates
                .iter()
                .filter(|x| !done.contains(x.id.as_str()))
                .map(|x| x.id.clone())
                .collect(),
        });
    }
    if !g.rotation.is_empty() {
        let edges = g.edges();
        let ids: Vec<&String> = g.inputs.iter().chain(g.gates.iter().map(|x| &x.id)).collect();
        for id in ids {
            let listed = g.rotation.get(id).cloned().unwrap_or_default();
            let incident: Vec<&Edge> = edges.iter().filter(|e| &e.from == id || &e.to == id).collect();
            for e in &incident {
                let count = listed.iter().filter(|n| **n == e.name).count();
                if count == 0 {
                    v.push(Violation::RotationMissing {
                        vertex: id.clone(),
                        edge: e.name.clone(),
                    });
                } else if count > 1 {
                    v.push(Violation::RotationExtra {
                        vertex: id.clone(),
                        edge: e.name.clone(),
                    });
                }
            }
            for n in &listed {
                if !incident.iter().any(|e| &e.name == n) {
                    v.push(Violation::RotationExtra {
                        vertex: id.clone(),
                        edge: n.clone(),
                    });
                }
            }
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

impl CircuitGraph {
    fn topological_gates_partial(&self) -> Vec<&str> {
        let mut done: HashSet<&str> = self.inputs.iter().map(String::as_str).collect();
        loop {
            let before = done.len();
            for g in &self.gates {
                if g.inputs.iter().all(|s| done.contains(s.as_str())) {
                    done.insert(&g.id);
                }
            }
            if done.len() == before {
                return done.into_iter().collect();
            }
        }
    }

    /// `x -> t`.
    pub fn identity() -> Self {
        CircuitGraph {
            inputs: vec!["x".into()],
            gates: vec![gate("t", GateOp::Sink, &["x"])],
            sink: Some("t".into()),
            rotation: BTreeMap::new(),
        }
    }

    /// `t <- NAND(x, x)`, satisfied by `x = false`.
    pub fn self_nand() -> Self {
        CircuitGraph {
            inputs: vec!["x".into()],
            gates: vec![gate("g", GateOp::Nand, &["x", "x"]), gate("t", GateOp::Sink, &["g"])],
            sink: Some("t".into()),
            rotation: BTreeMap::new(),
        }
    }

    /// `c = NAND(x, NAND(x, x))` is always true, so `t <- NAND(c, c)` is
    /// never satisfied.
    pub fn constant_false() -> Self {
        CircuitGraph {
            inputs: vec!["x".into()],
            gates: vec![
                gate("g1", GateOp::Nand, &["x", "x"]),
                gate("c", GateOp::Nand, &["x", "g1"]),
                gate("g3", GateOp::Nand, &["c", "c"]),
                gate("t", GateOp::Sink, &["g3"]),
            ],
            sink: Some("t".into()),
            rotation: BTreeMap::new(),
        }
    }
}

fn gate(id: &str, op: GateOp, inputs: &[&str]) -> Gate {
    Gate {
        id: id.into(),
        op,
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
    }
}
