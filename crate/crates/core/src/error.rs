use thiserror::Error;

use crate::grammar::Violation;

/// Why a single rewriting step cannot be applied.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("position {pos} out of range for form of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("rule {rule} does not exist (grammar has {count} rules)")]
    UnknownRule { rule: usize, count: usize },
    #[error("symbol {found} at position {pos} does not match rule left-hand side {expected}")]
    SymbolMismatch { pos: usize, found: String, expected: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("derivation final form `{left}` does not match next start form `{right}`")]
    FormMismatch { left: String, right: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("search budget exceeded: explored {explored} forms (cap {cap})")]
    BudgetExceeded { explored: usize, cap: usize },
    #[error("grammar is invalid: {}", format_violations(.0))]
    InvalidGrammar(Vec<Violation>),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
