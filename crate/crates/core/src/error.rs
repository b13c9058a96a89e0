use thiserror::Error;

/// Errors surfaced by the library.
///
/// `InternalInvariant` is reserved for conditions that are impossible under
/// validated parameters (e.g. a GTDS quadratic evaluating to zero); callers
/// should treat it as parameter corruption rather than bad input.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("field elements belong to different moduli")]
    ModulusMismatch,

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("modulus must be an odd prime > 4")]
    ModulusTooSmall,

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },

    #[error("operation is undefined for the zero element")]
    ZeroInput,

    #[error("expected {expected} field elements, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("constant generation exceeded {0} rejection-sampling iterations")]
    IterationCap(usize),

    #[error("problem size exceeds the desk-scale guard: {0}")]
    SizeGuard(String),

    #[error("malformed encoding: {0}")]
    Encoding(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
