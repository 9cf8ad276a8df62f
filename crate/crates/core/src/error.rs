use thiserror::Error;

/// Errors raised by the geometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("matrix is not symplectic (residual {residual:e})")]
    NotSymplectic { residual: f64 },

    #[error("matrix neither commutes nor anticommutes with Q (residuals {commute:e}, {anticommute:e})")]
    NotInHatGroup { commute: f64, anticommute: f64 },

    #[error("blocks do not follow the sign pattern (residual {residual:e})")]
    MalformedBlocks { residual: f64 },

    #[error("stabilizer parameters must have unit modulus (|xi1| = {xi1}, |xi2| = {xi2})")]
    UnitModulusViolation { xi1: f64, xi2: f64 },

    #[error("matrix [[k1, k2], [k2, k1]] is not positive definite (k1 = {k1}, k2 = {k2})")]
    NotPositiveDefinite { k1: f64, k2: f64 },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("parameter {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("geodesic endpoints coincide (distance {distance:e})")]
    DegeneratePair { distance: f64 },

    #[error("scale parameter must be positive, got {0}")]
    NonPositiveMu(f64),

    #[error("parameter must be nonzero")]
    ZeroParameter,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

impl Error {
    /// True for failures caused by floating point breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SingularMatrix { .. } | Error::NumericalBreakdown(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
