//! Model checking for a first-order dynamic game logic with imperfect
//! information, under team semantics.
//!
//! Games denote sets of transitions (maps from assignments to nonempty
//! teams); belief formulas denote sets of teams. Two engines decide `<g> phi`:
//! the reference engine enumerates strategies, the transition engine tracks
//! only (precondition, postcondition) pairs and is restricted to the
//! Transition Logic fragment.

pub mod engine;
pub mod error;
mod eval;
pub mod harness;
pub mod model;
pub mod syntax;
pub mod teams;
pub mod term;
pub mod transition;

pub use engine::{
    admissible, first_failing_team, is_strategy, is_true, satisfies, strategies, successors,
    Budget, EngineHandle, EngineKind, StrategySet, TRUTH_ASSIGNMENT_CAP,
};
pub use error::EvalError;
pub use model::{Assignment, Element, Model, ModelError, ParamEnv, Team, VarSet};
pub use syntax::{parse_belief, parse_game, BeliefFormula, GameFormula, ParseError};
pub use term::Term;
pub use transition::{ExplicitGame, Transition, TransitionError};
