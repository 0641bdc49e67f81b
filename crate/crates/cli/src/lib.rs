//! Command-line front end for the `pegarmy` toolkit.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 infeasible at the given
//! margin, 3 budget exhausted, 4 input rejected by validation or
//! verification.

pub mod cmd;
pub mod docs;
pub mod render;

pub use cmd::{run, Cli, Command, Failure, Outcome};
pub use docs::{CompileSidecar, OrderedDoc, RunManifest};
