use thiserror::Error;

/// The group axiom a Cayley table fails, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CayleyViolation {
    /// Entry out of range at (row, col).
    EntryOutOfRange { row: usize, col: usize, value: usize },
    /// No two-sided identity element exists.
    NoIdentity,
    /// Element has no inverse.
    NoInverse { element: usize },
    /// (a*b)*c != a*(b*c).
    NotAssociative { a: usize, b: usize, c: usize },
}

impl std::fmt::Display for CayleyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CayleyViolation::EntryOutOfRange { row, col, value } => {
                write!(f, "entry {value} at ({row},{col}) out of range")
            }
            CayleyViolation::NoIdentity => write!(f, "no two-sided identity"),
            CayleyViolation::NoInverse { element } => {
                write!(f, "no inverse for element {element}")
            }
            CayleyViolation::NotAssociative { a, b, c } => {
                write!(f, "associativity fails on ({a},{b},{c})")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed descriptor: {0}")]
    MalformedSpec(String),
    #[error("group order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("table is not a group: {0}")]
    NotAGroup(CayleyViolation),
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("{0} requires a nonempty set")]
    EmptySet(&'static str),
    #[error("H is not a subgroup")]
    NotASubgroup,
    #[error("operation requires an abelian group")]
    NonAbelian,
    #[error("group exponent {exponent} does not divide {r}")]
    ExponentMismatch { exponent: usize, r: usize },
    #[error("X is not contained in B*B*B")]
    OutsideMeasureDomain,
    #[error("ladder rank {r} exceeds cap {cap}")]
    LadderCapExceeded { r: usize, cap: usize },
    #[error("{what} budget exceeded ({limit})")]
    BudgetExceeded { what: &'static str, limit: usize },
    #[error("delta must lie in (0, 1]")]
    DeltaOutOfRange,
    #[error("k = l = 0 is not a valid iterated sumset")]
    TrivialSumset,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("C is not a valid cover of A")]
    InvalidCover,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
