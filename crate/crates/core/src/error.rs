use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {p}^{n} exceeds the supported maximum of {max}")]
    FieldTooLarge { p: u64, n: u32, max: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("F_{dst} is not an extension of F_{src}")]
    NotExtension { src: u64, dst: u64 },
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("coefficient vector has wrong length: expected {expected}, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("the zero polynomial does not define a curve")]
    ZeroForm,
    #[error("point does not lie on the curve")]
    PointNotOnCurve,
    #[error("point does not lie on the line")]
    PointNotOnLine,
    #[error("curve is singular at {0}")]
    SingularPoint(String),
    #[error("the line is a component of the curve")]
    LineIsComponent,
    #[error("degree {0} is outside the supported range")]
    UnsupportedDegree(usize),
    #[error("full enumeration of PGL(3,{0}) is not supported (q must be at most 8)")]
    GroupTooLarge(u64),
    #[error("action maps an item outside the given item set")]
    ActionNotClosed,
    #[error("no group element fixes every item; not a group action with identity")]
    MissingIdentity,
    #[error("orbit counts disagree: fixed-point route {fixed_route}, partition route {partition_route}")]
    OrbitCountMismatch {
        fixed_route: u64,
        partition_route: u64,
    },
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
