use thiserror::Error;

/// Errors raised by the algebra, decomposition, construction and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid structure constants: {0}")]
    InvalidConstants(String),

    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("structure is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("bracket is not a Lie bracket: {0}")]
    NotLieBracket(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("joint diagonalization failed: residual {residual:e} exceeds {threshold:e}")]
    DiagonalizationFailed { residual: f64, threshold: f64 },

    #[error("form is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("H is not idempotent: |H.H - H| = {residual:e}")]
    IdempotentCheckFailed { residual: f64 },

    #[error("system (AS) violated at {equation}: residual {residual:e}")]
    SystemAsViolated { equation: String, residual: f64 },

    #[error("eigenvalue {eigenvalue} of S is outside {{0, 1}}")]
    SpectrumNotZeroOne { eigenvalue: f64 },

    #[error("block {block} is not skew-symmetric (residual {residual:e})")]
    BlockNotSkew { block: String, residual: f64 },

    #[error("the product on h1 does not vanish (residual {residual:e})")]
    Circ1NonZero { residual: f64 },

    #[error("system {name} violated: residual {residual:e}")]
    SystemViolated { name: String, residual: f64 },

    #[error("metric is singular")]
    SingularMetric,

    #[error("construction data failed validation at {equation}: residual {residual:e}")]
    ValidationFailed { equation: String, residual: f64 },

    #[error("Koszul form mismatch: residual {residual:e}")]
    KoszulMismatch { residual: f64 },

    #[error("endomorphism is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },

    #[error("hypothesis {name} failed: residual {residual:e}")]
    HypothesisFailed { name: String, residual: f64 },

    #[error("Milnor vector must be non-zero")]
    ZeroH,

    #[error("no non-zero u with L_u = 0")]
    NoKernelVector,

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("not an LSPK: {0}")]
    NotLspk(String),

    #[error("not Einstein: residual {residual:e}")]
    NotEinstein { residual: f64 },

    #[error("brute-force Ricci disagrees with -beta: residual {residual:e}")]
    OracleMismatch { residual: f64 },

    #[error("unknown system {0:?}")]
    UnknownSystem(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("parameter {name} = {value} out of range")]
    ParamOutOfRange { name: String, value: f64 },

    #[error("fixture {name} broken: {predicate} failed")]
    FixtureBroken { name: String, predicate: String },
}

pub type Result<T> = std::result::Result<T, Error>;
