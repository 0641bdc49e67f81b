use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use pegarmy_cli::cmd::{command_name, run, Cli, Outcome, EXIT_ERROR};
use pegarmy_cli::docs::{to_json, RunManifest};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let started = Instant::now();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            Outcome {
                code: f.code,
                inputs: Vec::new(),
                outputs: Vec::new(),
                parameters: serde_json::Value::Null,
                result: serde_json::json!({ "error": format!("{:#}", f.error) }),
            }
        }
    };
    let show = |p: &PathBuf| p.display().to_string();
    let manifest = RunManifest {
        command: command_name(&cli.command).to_string(),
        inputs: outcome.inputs.iter().map(show).collect(),
        parameters: outcome.parameters,
        outputs: outcome.outputs.iter().map(show).collect(),
        wall_time_ms: started.elapsed().as_millis() as u64,
        exit_code: outcome.code,
        result: outcome.result,
    };
    let target = cli
        .manifest
        .clone()
        .or_else(|| outcome.outputs.first().map(|p| p.with_extension("manifest.json")));
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, to_json(&manifest)) {
                eprintln!("error: writing {}: {e}", path.display());
            }
        }
        None => eprint!("{}", to_json(&manifest)),
    }
    ExitCode::from(outcome.code as u8)
}
