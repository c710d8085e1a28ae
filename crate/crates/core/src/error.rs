use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// Callers that violate a documented precondition get a structured variant,
/// never a panic. `Internal` signals a broken construction invariant and is
/// a bug if it ever surfaces.
#[derive(Debug, Error)]
pub enum Error {
    #[error("moduli are not pairwise coprime: {0}")]
    NonCoprimeModuli(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("factorization budget exceeded: {0}")]
    FactorizationBudgetExceeded(String),

    #[error("element is not a unit modulo the given modulus: {0}")]
    NotAUnit(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("matrix is not square: {0}")]
    NotSquare(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("bad factorization: {0}")]
    BadFactorization(String),

    #[error("matrix is not in SL modulo n: {0}")]
    NotSlModN(String),

    #[error("matrix is not symplectic modulo n: {0}")]
    NotSymplecticModN(String),

    #[error("no unit entry: {0}")]
    NoUnitEntry(String),

    #[error("bad length: {0}")]
    BadLength(String),

    #[error("row is not unital: {0}")]
    RowNotUnital(String),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("modulus is not an odd prime: {0}")]
    NotPrimeModulus(String),

    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code for CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonCoprimeModuli(_) => "NonCoprimeModuli",
            Error::OutOfRange(_) => "OutOfRange",
            Error::FactorizationBudgetExceeded(_) => "FactorizationBudgetExceeded",
            Error::NotAUnit(_) => "NotAUnit",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotSquare(_) => "NotSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::NotSymmetric => "NotSymmetric",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::BadFactorization(_) => "BadFactorization",
            Error::NotSlModN(_) => "NotSLModN",
            Error::NotSymplecticModN(_) => "NotSymplecticModN",
            Error::NoUnitEntry(_) => "NoUnitEntry",
            Error::BadLength(_) => "BadLength",
            Error::RowNotUnital(_) => "RowNotUnital",
            Error::BadShape(_) => "BadShape",
            Error::NotPrimeModulus(_) => "NotPrimeModulus",
            Error::Internal(_) => "InternalError",
        }
    }

    /// True for caller-input errors (CLI exit code 2), false for internal bugs (exit 1).
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
