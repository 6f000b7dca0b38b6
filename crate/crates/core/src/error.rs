use thiserror::Error;

/// Errors produced by the quantizer-design library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("point {y} is outside the evaluable support of the tabulated density")]
    OutOfSupport { y: f64 },

    #[error("posterior undefined: both density values are zero")]
    UndefinedPosterior,

    #[error("discretization produced no atoms with positive mass")]
    EmptyGrid,

    #[error("invalid discretization: {0}")]
    InvalidDiscretization(String),

    #[error("cell has zero total mass")]
    EmptyCell,

    #[error("invalid quantizer: {0}")]
    InvalidQuantizer(String),

    #[error("constraint term count {got} does not match cell count {expected}")]
    TermCountMismatch { got: usize, expected: usize },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large for exhaustive search: {n_cells}^{m_atoms} labelings exceed the guard of {guard}")]
    OracleTooLarge {
        n_cells: usize,
        m_atoms: usize,
        guard: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
