//! File formats owned by the command line: ordered solutions with their
//! board, compiled-board sidecars and run manifests.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use pegarmy::reachability::Limits;
use pegarmy::reduction::{Decision, LintRecord, ProvenanceEntry};
use pegarmy::{BoardFile, Jump, Move, Position, ReductionTrace};

/// Output of `order`: the reversed sequence as found, and the forward game
/// it encodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedDoc {
    pub board: BoardFile,
    /// Start of the reversed game, normally one peg on the target.
    pub reversed_start: Vec<Position>,
    pub relaxed_total: u64,
    /// Reversed moves in application order.
    pub reversed: Vec<Move>,
    /// Initial deployment of the forward game.
    pub army: Vec<Position>,
    pub forward: Vec<Jump>,
    pub trace: ReductionTrace,
}

/// Everything about a compiled board that the board file itself cannot
/// carry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileSidecar {
    pub start: Vec<Position>,
    pub target: Position,
    pub provenance: Vec<ProvenanceEntry>,
    pub lint: Vec<LintRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionDoc {
    pub reachable: bool,
    pub exact: Option<bool>,
    pub exact_explored: u64,
    pub exact_budget: u64,
    pub staged_reaching: Vec<Vec<bool>>,
    pub witness_len: Option<usize>,
}

impl DecisionDoc {
    pub fn new(d: &Decision, exact: Limits) -> Self {
        DecisionDoc {
            reachable: d.reachable(),
            exact: d.exact,
            exact_explored: d.exact_explored,
            exact_budget: exact.max_states,
            staged_reaching: d.staged_reaching.clone(),
            witness_len: d.witness.as_ref().map(Vec::len),
        }
    }
}

/// One per run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub wall_time_ms: u64,
    pub exit_code: i32,
    pub result: serde_json::Value,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)).with_context(|| format!("writing {}", path.display()))
}
