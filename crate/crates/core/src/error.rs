use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid dimensions must be even and at least 4 in both directions, got {m}x{n}")]
    InvalidDims { m: usize, n: usize },
    #[error("node ({row},{col}) out of range for a {m}x{n} grid")]
    NodeOutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },
    #[error("edge with origin ({row},{col}) out of range for a {m}x{n} grid")]
    EdgeOutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("cycle is not contractible: winding ({vertical},{horizontal})")]
    NonContractible { vertical: i64, horizontal: i64 },
    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pfaffian is only defined for even-sized matrices, got size {0}")]
    OddMatrixSize(usize),
    #[error("matrix is not antisymmetric at ({0},{1})")]
    NotAntisymmetric(usize, usize),
    #[error("{m}x{n} grid exceeds the enumeration guard of {limit} nodes; raise the guard to proceed")]
    GuardExceeded { m: usize, n: usize, limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
