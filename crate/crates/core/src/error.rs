use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty group")]
    EmptyGroup,

    /// A dual point left the domain of a conjugate. For norm penalties the
    /// caller is expected to rescale first.
    #[error("dual point outside conjugate domain: {0}")]
    DualInfeasible(String),

    #[error("infeasible iterate: {0}")]
    Infeasible(String),

    #[error("rule family unavailable for this objective: {0}")]
    MissingStrongConvexity(&'static str),

    #[error("rule {rule} does not apply to this problem: {reason}")]
    IncompatibleRule { rule: &'static str, reason: String },

    /// Computed gap more negative than rounding can explain.
    #[error("duality violated: gap {0:e}")]
    NegativeGap(f64),

    #[error("budget exhausted at gap {gap:e} (target {target:e})")]
    BudgetExhausted { gap: f64, target: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
