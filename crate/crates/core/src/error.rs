use std::fmt;

use thiserror::Error;

/// The user-supplied evaluator that produced a bad value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    Hamiltonian,
    HamiltonianGrad,
    HamiltonianConjugate,
    InitialValue,
    InitialGrad,
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Evaluator::Hamiltonian => "hamiltonian",
            Evaluator::HamiltonianGrad => "hamiltonian_grad",
            Evaluator::HamiltonianConjugate => "hamiltonian_conjugate",
            Evaluator::InitialValue => "initial_value",
            Evaluator::InitialGrad => "initial_grad",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("Hopf-Lax energy is undefined at t = 0")]
    ZeroTime,

    #[error("evaluator `{0}` returned a non-finite value")]
    NonFinite(Evaluator),

    #[error("iterate norm {norm:.3e} exceeded the divergence guard {threshold:.3e} after {iterations} iterations")]
    Diverged {
        norm: f64,
        threshold: f64,
        iterations: usize,
    },

    #[error("all {attempted} starts diverged")]
    AllDiverged { attempted: usize },

    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(&'static str),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("problem `{id}` does not support dimension {dim}")]
    UnsupportedDimension { id: String, dim: usize },

    #[error("the grid oracle supports at most 3 dimensions, got {0}")]
    OracleDimension(usize),

    #[error("empty record set")]
    EmptyRecords,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
