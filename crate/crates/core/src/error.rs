use std::io;

use thiserror::Error;

/// Errors raised by graph construction, colouring and the simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid arrival order: {0}")]
    InvalidOrder(String),

    #[error("{what} has size {size}, above the limit of {limit}; {hint}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error(
        "fixed colouring is improper: vertices {u} and {v} are adjacent and share colour {colour}"
    )]
    ImproperColouring { u: usize, v: usize, colour: u32 },

    #[error("branch cap of {cap} exceeded after exploring {explored} branches")]
    BranchCapExceeded { explored: u64, cap: u64 },

    #[error("invalid spec `{spec}`: {message}")]
    Spec { spec: String, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
