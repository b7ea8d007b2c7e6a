use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix must be square and non-empty")]
    NotSquare,
    #[error("gram matrix is not symmetric: entry ({0}, {1}) differs from ({1}, {0})")]
    NotSymmetric(usize, usize),
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector has non-integer coordinates")]
    NonIntegralVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("negative input to integer square root")]
    NegativeSqrt,
    #[error("form is not positive definite on the enumeration span")]
    Indefinite,
    #[error("norm must be positive")]
    NonPositiveNorm,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    Diagram(String),
    #[error("invalid plane frame: {0}")]
    Frame(String),
    #[error("plane lattice is isotropic")]
    Isotropic,
    #[error("negative discriminant in canonical supplement")]
    NegativeDiscriminant,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("internal contradiction: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
