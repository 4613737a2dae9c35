//! Toolkit for CSS quantum codes: exact brute-force distance and
//! local-testability (soundness) oracles, a small zoo of code families, and
//! the transformation suite (distance balancing, four-stage weight
//! reduction, soundness amplification over lossless expanders, and
//! concatenation-based distance amplification).

pub mod balance;
mod cli;
pub mod codefile;
pub mod css;
pub mod distamp;
pub mod gf2;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod soundamp;
pub mod weightred;
pub mod zoo;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{violations} anticommuting stabiliser pair(s); first is X row {x_row} against Z row {z_row}")]
    Commutation {
        violations: usize,
        x_row: usize,
        z_row: usize,
    },
    #[error("enumeration needs 2^{needed}, budget allows 2^{budget}")]
    BudgetExceeded { needed: u32, budget: u32 },
    #[error("code has no logical qubits")]
    NoLogicals,
    #[error("soundness undefined: the check matrix has full kernel, every syndrome is zero")]
    SoundnessUndefined,
    #[error("not reasonable: Z-stabiliser {stab} supports a nontrivial Z-logical")]
    Unreasonable { stab: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// CLI entry point; returns the process exit code.
pub fn run_cli() -> i32 {
    cli::run()
}
