use thiserror::Error;

/// Failures raised by the exact-arithmetic engine.
///
/// Verification mismatches are not errors: they surface as report entries.
/// The variants here mark inputs outside an operation's contract, or internal
/// transcription bugs that should never reach a report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series reciprocal needs a nonzero lowest coefficient")]
    ReciprocalOfZeroLeadingTerm,
    #[error("integrating an x^-1 term would require a logarithm")]
    LogTermRequired,
    #[error("Laurent pole of depth {depth} exceeds the supported bound {bound}")]
    PoleDepthExceeded { depth: i64, bound: i64 },
    #[error("Pochhammer symbol ({b})_{k} vanishes: lower parameter is a non-positive integer")]
    PochhammerPole { b: String, k: usize },
    #[error("eigen-equation check failed for {family} n={n}: residual nonzero at x^{exponent}")]
    EigencheckFailed { family: String, n: usize, exponent: i64 },
    #[error("recursion coefficient for offset {offset} has a pole at n={n}")]
    CoefficientPoleOnRange { offset: i64, n: i64 },
    #[error("truncation slack leaves no valid coefficients (valid order {valid}, low order {low})")]
    ValidOrderTooSmall { valid: i64, low: i64 },
    #[error("inconsistent linear system on the free seeds")]
    InconsistentSystem,
    #[error("expected a kernel of dimension {expected}, found {found}")]
    UnexpectedKernelDimension { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
