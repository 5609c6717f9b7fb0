use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("matrix is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("case {0} does not exist (expected 1..=7)")]
    UnknownCase(u8),

    #[error("no sign change of the cos(2γ) coefficient on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("payoff is not of the form c0 + c1·cos(2γ) (residual {residual:e} at γ = {gamma})")]
    NotCosineFamily { gamma: f64, residual: f64 },

    #[error("Kraus elements are not trace preserving (max |ΣK†K - I| = {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),
}
