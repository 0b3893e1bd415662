use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments violate a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice dimension {dim} exceeds the configured maximum {max}")]
    Resource { dim: usize, max: usize },

    /// The operator handed to a symmetry routine does not commute with the
    /// Hamiltonian.
    #[error("operator is not a symmetry of the Hamiltonian: commutator norm {norm:e}")]
    SymmetryMismatch { norm: f64 },

    /// An experiment configuration cannot be realized (open shell, empty or
    /// leaking packet support).
    #[error("configuration error: {0}")]
    Configuration(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }
}
