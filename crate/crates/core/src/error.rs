use thiserror::Error;

/// Errors raised by the exact kernels and the detectors built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conductor mismatch: {0}")]
    ConductorMismatch(String),
    #[error("field mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("zero vector is not a projective point")]
    ZeroVector,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("projective order exceeds bound {0}")]
    OrderExceedsBound(u64),
    #[error("unsupported matrix shape: {0}")]
    UnsupportedShape(String),
    #[error("cycle product is not a root of unity")]
    UnrecognizedCycleProduct,
    #[error("point has multiplicity {0}; only smooth points and points off the hypersurface are admissible")]
    SingularPoint(u32),
    #[error("inconsistent input: {0}")]
    Inconsistency(String),
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("theorem consistency violated: {0}")]
    TheoremViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("deadline exceeded")]
    Timeout,
    #[error("degree {0} exceeds the exact Groebner guard (40); pass an override to force")]
    DegreeGuard(u32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("inhomogeneous input: term {term} has degree {degree}, expected {expected}")]
    Inhomogeneous {
        term: usize,
        degree: u32,
        expected: u32,
    },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("group closure exceeds bound {0}")]
    ClosureExceedsBound(usize),
    #[error("quotient genus is not a non-negative integer: {0}")]
    NonIntegralGenus(String),
}

pub type Result<T> = std::result::Result<T, Error>;
