use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("operands live over different residue fields (p = {0} and p = {1})")]
    PrimeMismatch(u32, u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("no square root: valuation {0} is odd")]
    OddValuation(i32),

    #[error("no square root: leading coefficient {0} is not a square mod {1}")]
    NonResidue(u32, u32),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integral did not stabilize between radius {radius} and {next}", next = radius + 1)]
    NotStabilized { radius: i32 },

    #[error("enumeration of {needed} tuples exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("degenerate Weil integral: {0}")]
    DegenerateWeil(String),

    #[error("unknown evaluator `{0}`")]
    UnknownEvaluator(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }
}
