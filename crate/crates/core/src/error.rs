use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid ring: structure constants violate well-definedness at (i, j, k) = ({i}, {j}, {k})")]
    InvalidRing { i: usize, j: usize, k: usize },

    #[error("invalid ring: {0}")]
    Shape(String),

    #[error("subgroups belong to different parent groups")]
    ParentMismatch,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("bilinear map is degenerate: a nonzero element pairs to zero with everything")]
    Degenerate,

    #[error("scalar ring axioms violated: {0}")]
    ScalarAxioms(String),

    #[error("scalar ring undefined: {0}")]
    ScalarRingUndefined(String),

    #[error("factorization incomplete: {0}")]
    FactorizationIncomplete(String),

    #[error("ring is infinite; model checking needs a finite ring")]
    InfiniteRing,

    #[error("carrier of size {size} exceeds the limit {limit}")]
    CarrierTooLarge { size: String, limit: usize },

    #[error("free variable `{0}` is not assigned")]
    UnassignedVariable(String),

    #[error("formula has {found} free variables, expected {expected}")]
    Arity { expected: usize, found: usize },

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("class constraint violated: {0}")]
    ClassConstraint(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidRing { .. } | Error::Shape(_) => 3,
            Error::Internal(_) | Error::ParentMismatch | Error::ScalarAxioms(_) => 4,
            _ => 2,
        }
    }
}
