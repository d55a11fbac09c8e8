use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("substitution would capture variable {0}")]
    Capture(String),
    #[error("rule {rule} does not match: {detail}")]
    NoMatch { rule: String, detail: String },
    #[error("side condition of {rule} violated: {detail}")]
    SideConditionViolated { rule: String, detail: String },
    #[error("rule {0} is an entailment and cannot be applied right to left")]
    EntailmentReversed(String),
    #[error("unexpected shape: {0}")]
    Shape(String),
    #[error("size limit of {limit} nodes exceeded")]
    SizeLimitExceeded { limit: usize },
    #[error("counting index must be at least 1, got {0}")]
    BadCount(u32),
    #[error("bad arguments: {0}")]
    BadArgs(String),
    #[error("formula outside the accepted class: {0}")]
    Class(String),
    #[error("eliminand {0} occurs in a side formula")]
    EliminandOccurs(String),
    #[error("occurrences of {0} do not share the required polarity")]
    PolarityViolation(String),
    #[error("eliminand {0} occurs in the definiens")]
    EliminandInDefiniens(String),
    #[error("symbol {0} is not fresh")]
    NotFresh(String),
    #[error("subformula is not eligible: {0}")]
    Eligibility(String),
    #[error("no interpretation for symbol {0}")]
    MissingSymbol(String),
    #[error("interpretation budget of {limit} exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("predicate {pred} used with arities {first} and {second}")]
    Arity { pred: String, first: usize, second: usize },
}

impl Error {
    pub(crate) fn no_match(rule: impl std::fmt::Display, detail: impl Into<String>) -> Self {
        Error::NoMatch { rule: rule.to_string(), detail: detail.into() }
    }

    pub(crate) fn side(rule: impl std::fmt::Display, detail: impl Into<String>) -> Self {
        Error::SideConditionViolated { rule: rule.to_string(), detail: detail.into() }
    }

    /// True for the resource-limit errors that map to exit code 3 on the command line.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::SizeLimitExceeded { .. } | Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
