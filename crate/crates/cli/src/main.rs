//! `argqubo`: decide argumentation tasks and enforce extensions by simulated
//! annealing over QUBO encodings.

mod config;
mod solve;
mod tools;

use std::process::ExitCode;

use argqubo::{AnnealError, SolveError};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "argqubo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a DC, SC, EX or NE task
    Solve(solve::SolveArgs),
    /// Edit attacks so a target set becomes a complete extension
    Enforce(tools::EnforceArgs),
    /// Generate random benchmark frameworks
    Gen(tools::GenArgs),
    /// Print the QUBO for a task or semantics
    Encode(tools::EncodeArgs),
    /// Check one set against a semantics
    Verify(tools::VerifyArgs),
    /// List all extensions (exhaustive, small frameworks only)
    Enumerate(tools::EnumerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Invalid,
    Uncertified,
    Inconsistent,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Solved => 0,
            Outcome::Invalid => 2,
            Outcome::Uncertified => 3,
            Outcome::Inconsistent => 4,
        }
    }
}

/// A zero-energy sample that failed verification.
pub fn is_inconsistency(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        matches!(
            e.downcast_ref::<AnnealError>(),
            Some(AnnealError::InconsistentWitness { .. })
        ) || matches!(
            e.downcast_ref::<SolveError>(),
            Some(SolveError::Anneal(AnnealError::InconsistentWitness { .. }))
        )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Enforce(a) => tools::enforce(a),
        Command::Gen(a) => tools::gen(a),
        Command::Encode(a) => tools::encode(a),
        Command::Verify(a) => tools::verify(a),
        Command::Enumerate(a) => tools::enumerate(a),
    };
    let outcome = res.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        if is_inconsistency(&e) {
            Outcome::Inconsistent
        } else {
            Outcome::Invalid
        }
    });
    ExitCode::from(outcome.code())
}
