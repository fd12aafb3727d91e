//! `sfs-fill`: fillability of contact structures on `M(-1; r1, r2, r3)` from the
//! command line.
//!
//! Exit codes: 0 on success, 1 on internal errors or failed cross-checks, 2 on
//! invalid input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sfs-fill", version, about = "Stein fillability of zero-twisting contact structures on small Seifert fibered spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a rational or inspect a chain: value, s, truncations, dual.
    Cf(Common),
    /// Planar open book of a presentation.
    Translate {
        #[command(flatten)]
        common: Common,
        /// Move the outer boundary into this hole, e.g. `in` or `L3.1.1`.
        #[arg(long)]
        reroot: Option<String>,
    },
    /// Fillability verdict with certificates or an obstruction.
    Decide(Common),
    /// Multiplicities of the full book and the positive feasibility search.
    Oracle(Common),
    /// Positive factorization of the first fillable sublink, step by step.
    Factorize(Common),
    /// Level-by-level obstruction trace.
    Trace(Common),
    /// Every rotation assignment on one manifold or a family of manifolds.
    Survey {
        #[command(flatten)]
        common: Common,
        /// Only print records with this status.
        #[arg(long, value_enum)]
        status: Option<StatusFilter>,
    },
    /// Check that a list of positive twists has the class of a presentation's book.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Read the input JSON from a file.
    #[arg(long, conflicts_with = "json")]
    input: Option<PathBuf>,
    /// Inline input JSON.
    #[arg(long)]
    json: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Compare every verdict with the feasibility search.
    #[arg(long)]
    cross_check: bool,
    /// Lift the hole limit of the feasibility search.
    #[arg(long)]
    force: bool,
    /// Largest book the feasibility search accepts.
    #[arg(long, default_value_t = 14)]
    max_holes: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatusFilter {
    Fillable,
    NotFillable,
}

/// A failure and its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1.
    Internal(String),
}

impl Failure {
    /// Every error while reading input is the caller's.
    pub fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Errors after the input validated. Invariant violations there are bugs.
impl From<sfs_fill::Error> for Failure {
    fn from(e: sfs_fill::Error) -> Self {
        use sfs_fill::Error::*;
        match e {
            Parse(_) | Domain(_) | UnknownHole(_) | CapOuter(_) | SizeGuard { .. } | Precondition(_) => {
                Failure::Input(e.to_string())
            }
            Validation { .. } | DivisionByZero(_) | UniverseMismatch(_) | TemplateMismatch { .. } => {
                Failure::Internal(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
