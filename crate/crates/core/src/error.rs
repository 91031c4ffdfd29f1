use thiserror::Error;

use crate::transition::TransitionError;

/// Errors raised while evaluating terms, games and belief formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    #[error("invalid choice function: {0}")]
    InvalidChoiceFunction(String),
    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("outside Transition Logic: {0}")]
    OutsideTransitionLogic(String),
    #[error("model has {assignments} assignments; truth checking is capped at {cap}")]
    TooManyAssignments { assignments: usize, cap: usize },
    #[error(transparent)]
    Transition(#[from] TransitionError),
}

impl EvalError {
    pub fn is_budget(&self) -> bool {
        matches!(self, EvalError::BudgetExceeded(_))
    }
}
