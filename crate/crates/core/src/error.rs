use thiserror::Error;

use crate::moments::DenomKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported constant: {0}")]
    UnsupportedConstant(String),

    #[error("variable `{0}` is not assigned a value")]
    UnassignedVariable(String),

    #[error("divergent moment: integral of l^{power} / {denom} does not converge")]
    DivergentMoment { power: u32, denom: DenomKind },

    #[error("wrong parity: integral of l^{power} / {denom} is not a tabulated moment")]
    WrongParity { power: u32, denom: DenomKind },

    #[error("{0}")]
    Schema(#[from] SchemaError),

    #[error("variable count mismatch: expected {expected}, got {got}")]
    VariableCount { expected: usize, got: usize },

    #[error("special surface: {0}")]
    SpecialSurface(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("insufficient precision: have {have} digits, need at least {need}")]
    InsufficientPrecision { have: u32, need: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

/// Validation failure in a JSON document, located by JSON pointer.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at {pointer}: {message}")]
pub struct SchemaError {
    pub kind: SchemaErrorKind,
    pub pointer: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaErrorKind {
    Malformed,
    OddPower,
    NegativeCoefficient,
    NotHomogeneous,
}

impl std::fmt::Display for SchemaErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemaErrorKind::Malformed => "schema violation",
            SchemaErrorKind::OddPower => "odd power",
            SchemaErrorKind::NegativeCoefficient => "negative coefficient",
            SchemaErrorKind::NotHomogeneous => "not homogeneous",
        })
    }
}

impl SchemaError {
    pub fn new(kind: SchemaErrorKind, pointer: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError { kind, pointer: pointer.into(), message: message.into() }
    }
}
