use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared color `{0}`")]
    UndeclaredColor(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("enumeration budget exceeded: {needed} configurations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("sentence is not in the required fragment: {0}")]
    WrongFragment(String),

    #[error("boundary convention does not match the evaluation domain: {0}")]
    ConventionMismatch(String),

    #[error("pseudo-atom cannot be handled here: {0}")]
    PseudoAtom(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
