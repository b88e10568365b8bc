use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0:?} is not a monic irreducible polynomial of the requested degree")]
    ReducibleModulus(Vec<u32>),
    #[error("field order {0} exceeds the supported cap")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires odd q, got q = {0}")]
    EvenOrder(u32),
    #[error("operation requires even q, got q = {0}")]
    OddOrder(u32),

    #[error("the two points coincide")]
    IdenticalPoints,
    #[error("the two lines coincide")]
    IdenticalLines,
    #[error("coordinate triple is zero")]
    ZeroVector,
    #[error("coordinate {0} is not an element of the field")]
    BadCoordinate(u32),

    #[error("quadratic form does not define an irreducible conic")]
    DegenerateConic,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("line is not external to the conic")]
    NotExternal,
    #[error("point is not an exterior point of the conic")]
    NotExterior,

    #[error("affine set meets the line at infinity")]
    PointsOnInfinity,
    #[error("expected a set of size {expected}, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("|S| = {size} but |S ∩ L∞| = {on_line} and q = {q}")]
    SizeMismatch { size: usize, on_line: usize, q: u32 },

    #[error("a = {0} does not satisfy the two-conic condition")]
    InvalidA(u32),
    #[error("q = {0} is too small for this construction")]
    QTooSmall(u32),
    #[error("r = {r} exceeds the admissible maximum {max}")]
    RTooLarge { r: usize, max: usize },
    #[error("construction needs a proper extension field (h ≥ 2), got q = {0} prime")]
    PrimeField(u32),
    #[error("construction needs odd characteristic")]
    EvenCharacteristic,

    #[error("size cap {cap} is below the lower bound {bound}")]
    CapTooSmall { cap: usize, bound: usize },
    #[error("no set without tangents of size at most {0}")]
    NotFound(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("infeasible enumeration instance: {0}")]
    Infeasible(String),
    #[error("group too large for orbit computation: {0}")]
    GroupTooLarge(String),
    #[error("time budget exceeded; verified lower bound {lower_bound}")]
    TimeBudgetExceeded { lower_bound: usize, best: Option<usize> },

    #[error("vector is not a codeword of the dual code")]
    NotCodeword,
    #[error("vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },

    #[error("format error: {0}")]
    Format(String),
}
