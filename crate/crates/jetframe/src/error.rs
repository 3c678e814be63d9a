use thiserror::Error;

use crate::var::VarId;

/// Errors surfaced by the symbolic layers.
#[derive(Debug, Error)]
pub enum Error {
    /// `eval` met a variable with no assigned value.
    #[error("unassigned variable {0} in evaluation")]
    UnassignedVariable(VarId),

    /// Pole order is only defined on standard-coordinate expressions.
    #[error("unsupported variable {0} for pole order (geometric coordinates have no pole grading)")]
    UnsupportedVariable(VarId),

    /// Invalid problem instance.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// `U_q^beta` closed form needs `|beta| + q <= d`.
    #[error("|beta| + q = {0} exceeds degree {1}; use the general constructor")]
    Range(usize, usize),

    /// No multi-index `lambda <= beta` with the required length exists.
    #[error("no valid lambda below beta = {0:?} with length {1}")]
    NoValidLambda(Vec<u32>, usize),

    /// The requested parameter slot is consumed by the corrections.
    #[error("reserved parameter index {0:?}")]
    ReservedIndex(Vec<u32>),

    /// Slanted fields exist only for directions j = 2..n (plus the base (1,0)).
    #[error("invalid slanted direction (j, q) = ({0}, {1})")]
    InvalidDirection(u32, u32),

    /// Logarithmic constructor called on a compact instance or vice versa.
    #[error("operation requires the {0} case")]
    WrongCase(&'static str),

    /// Vertical-point sampling kept hitting singular systems.
    #[error("sampling exhausted after {0} retries")]
    SamplingExhausted(u32),

    /// A construction-time identity check failed; the block is not returned.
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
