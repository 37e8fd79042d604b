use thiserror::Error;

use crate::repr::Representation;

/// Errors raised by network construction, conversion and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("normalization impedance must have a positive real part (got {re} {im:+}j)")]
    NonPositiveRealPart { re: f64, im: f64 },

    #[error("wave scaling constant k is zero")]
    ZeroK,

    #[error("normalization impedance is zero")]
    ZeroImpedance,

    #[error("alpha must have unit modulus (got |alpha| = {0})")]
    NonUnitAlpha(f64),

    #[error("{rep} parameters require {expected} ports, got {got}")]
    PortCountMismatch {
        rep: Representation,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("conversion {from} -> {to} does not exist for this network (rcond {rcond:.3e})")]
    SingularConversion {
        from: Representation,
        to: Representation,
        rcond: f64,
    },

    #[error("singular matrix (rcond {0:.3e})")]
    SingularMatrix(f64),

    #[error("sample system is rank deficient (rcond {0:.3e})")]
    RankDeficient(f64),

    #[error("least-squares fit left relative residual {0:.3e}")]
    InconsistentFit(f64),

    #[error("frequencies must be non-negative and strictly increasing (at index {0})")]
    NonMonotonicFrequency(usize),

    #[error("at {frequency} Hz: {source}")]
    AtFrequency { frequency: f64, source: Box<Error> },

    #[error("network points disagree on {0}")]
    NonUniformSweep(&'static str),

    #[error("cascade operands differ in {0}")]
    IncompatibleOperands(&'static str),

    #[error("{from} -> {to} is not a supported closed-form pair")]
    UnsupportedPair {
        from: Representation,
        to: Representation,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
