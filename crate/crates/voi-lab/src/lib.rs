//! `voi-lab`: exact interaction analysis for finite Bayesian decision
//! problems on the command line.
//!
//! Four subcommands: `demo` (built-in worked example with a hard self-check),
//! `eval` (full interaction report at one belief), `scan` (grid and ray CSV
//! sweeps), and `verify` (randomized falsification of the exact identities
//! and localization theorems).
//!
//! Exit codes: 0 success, 1 assertion or theorem violation, 2 usage or
//! validation error.

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use voi_core::{Channel, EvalError, ModelError, ProblemInstance};

pub mod args;
pub mod demo;
pub mod eval;
pub mod scan;
pub mod verify;

/// The worked-example instance shipped with the repository, compiled in so
/// `demo` and default scans work without any files.
pub const EMBEDDED_INSTANCE_JSON: &str = include_str!("../../../examples/paper.json");

pub fn embedded_instance() -> ProblemInstance {
    voi_core::parse_instance(EMBEDDED_INSTANCE_JSON).expect("embedded instance is valid")
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: file contents, belief strings, unknown channels, config.
    #[error("{0}")]
    Invalid(String),
    /// A self-check, identity, or theorem failed. Exit code 1.
    #[error("{0}")]
    Violation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            _ => 2,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(format!("json: {e}"))
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::TheoremViolation { .. } | EvalError::Internal(_) => {
                CliError::Violation(e.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub fn load_instance(path: Option<&Path>) -> Result<ProblemInstance, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Invalid(format!("cannot read instance `{}`: {e}", p.display()))
            })?;
            Ok(voi_core::parse_instance(&text)?)
        }
        None => Ok(embedded_instance()),
    }
}

pub fn get_channel<'a>(inst: &'a ProblemInstance, name: &str) -> Result<&'a Channel, CliError> {
    inst.channel(name).ok_or_else(|| {
        let available: Vec<&str> = inst.channel_names().collect();
        CliError::Invalid(format!(
            "unknown channel `{name}`; instance has: {}",
            available.join(", ")
        ))
    })
}

/// Worker cap for parallel commands: `VOI_LAB_THREADS` when set, otherwise
/// the available parallelism (at most 8). Results are merged in case order,
/// so output bytes do not depend on the thread count.
pub fn thread_limit() -> usize {
    if let Ok(v) = std::env::var("VOI_LAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

pub fn run(cli: args::Cli, stdout: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        args::Command::Demo { json } => demo::run(json, stdout),
        args::Command::Eval {
            instance,
            belief,
            channel_i,
            channel_j,
            json,
        } => eval::run(&instance, &belief, &channel_i, &channel_j, json, stdout),
        args::Command::Scan { mode } => scan::run(mode, stdout),
        args::Command::Verify {
            seed,
            cases,
            max_states,
            max_actions,
            max_outcomes,
            denom_bound,
        } => {
            let config = verify::FuzzConfig {
                seed,
                cases,
                max_states,
                max_actions,
                max_outcomes,
                denom_bound,
            };
            verify::run(&config, stdout)
        }
    }
}
