//! Compilation of planar NAND circuits into solitaire reachability boards.

pub mod circuit;
pub mod compile;
pub mod gadget;
pub mod layout;
pub mod library;

pub use circuit::{validate_circuit, CircuitGraph, Edge, Gate, GateOp, Violation};
pub use compile::{
    compile_circuit, decide, lint, staged_witness, CompileError, CompiledInstance, Decision, LintRecord,
    ProvenanceEntry, Role, StagedRun,
};
pub use gadget::{
    verify_gadget, Contract, ContractRow, Footprint, GadgetReport, GadgetSpec, Port, PortKind, Transform,
};
pub use layout::{Canvas, LayoutFailure};
pub use library::{gadget, gadget_contract, gadget_footprint, library, LibraryError, GADGET_NAMES};
