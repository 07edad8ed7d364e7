use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |H - H*| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("operation requires a nonzero matrix: {0}")]
    ZeroMatrix(String),

    #[error("rho = {0} outside (0, 2]")]
    RhoOutOfRange(f64),

    #[error("rho = {0} below the conditioning floor 1e-3")]
    RhoIllConditioned(f64),

    #[error("vector is not a unit vector (norm = {0})")]
    NotUnit(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
