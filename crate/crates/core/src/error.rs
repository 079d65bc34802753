use thiserror::Error;

/// Errors produced by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field element {value} out of range for GF(2^{k})")]
    ElementOutOfRange { value: u64, k: u32 },

    #[error("invalid modulus {modulus:#x} for degree {k}: {reason}")]
    InvalidModulus { k: u32, modulus: u64, reason: String },

    #[error("unsupported extension degree {0} (supported: 1..=20 from the table, up to 31 with an explicit modulus)")]
    UnsupportedDegree(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("expansion budget exceeded: {needed} items needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("factor {factor} of product {product} is not homogeneous")]
    NonHomogeneous { product: usize, factor: usize },

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("no trial satisfied the conditioning event ({trials} trials run)")]
    NoQualifyingTrials { trials: u64 },

    #[error("parameter search found no feasible point")]
    EmptyFeasibleRegion,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
