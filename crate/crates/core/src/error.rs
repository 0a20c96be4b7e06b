use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("defining polynomial has non-real roots")]
    NotTotallyReal,
    #[error("equation order is not maximal at {0}; supply an integral basis")]
    IntegralBasisRequired(u64),
    #[error("prime {0} divides the index of the equation order")]
    IndexDivisor(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("zero element")]
    ZeroElement,
    #[error("unsupported for fields of degree {0} without user class data")]
    DegreeUnsupported(usize),
    #[error("extension index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("weights out of order: {0} < {1}")]
    WeightOrder(i64, i64),
    #[error("weights do not share a parity")]
    ParityViolation,
    #[error("untwisted cohomological weight needs all weights even")]
    OddWeightUntwisted,
    #[error("negative factorial argument {0}")]
    NegativeFactorial(i64),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("Re(s) = {0} outside the region of absolute convergence")]
    OutOfConvergenceRegion(String),
    #[error("missing local data at {0}")]
    MissingLocalData(String),
    #[error("{0} is not a critical point")]
    NotCritical(String),
    #[error("division by a non-invertible element")]
    NotInvertible,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("complex embedding unsupported: {0}")]
    EmbeddingUnsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
