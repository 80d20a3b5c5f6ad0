//! Crate-wide error type.

use crate::scalar::NumberParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Number(#[from] NumberParseError),

    #[error("probability <= 0 on transition {from} -> {to}")]
    NonpositiveProbability { from: String, to: String },

    #[error("outgoing probabilities of state {state} sum to {sum}, expected 1")]
    RowSumNotOne { state: String, sum: String },

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error(
        "inconsistent output dimension on transition {from} -> {to}: expected {expected}, got {got}"
    )]
    OutputDimension {
        from: String,
        to: String,
        expected: usize,
        got: usize,
    },

    #[error("no output value for state `{0}`")]
    MissingStateOutput(String),

    #[error("outputs of state `{0}` differ across its outgoing transitions")]
    NonConstantStateOutput(String),

    #[error("chain fails validation: {0}")]
    InvalidChain(String),

    #[error("enumeration would visit {candidates} candidates, above the cap of {cap} (set MM_ENUM_CAP to raise it)")]
    EnumerationCap { candidates: u128, cap: u64 },

    #[error("output value {value} of output `{output}` is not in {{0,1}}")]
    NotZeroOne { output: String, value: String },

    #[error("output index {index} out of range (chain has {dim} outputs)")]
    OutputIndex { index: usize, dim: usize },

    #[error("vertex index {index} out of range (component has {size} vertices)")]
    VertexIndex { index: usize, size: usize },

    #[error("transducer is not input-deterministic and input-complete at state `{state}`")]
    BadTransducer { state: String },

    #[error("width parameter w must be at least 2, got {0}")]
    WidthTooSmall(u32),

    #[error("probability {0} outside the open interval (0, 1)")]
    ProbabilityRange(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("the moment engines disagree: {0}")]
    MethodDisagreement(String),
}
