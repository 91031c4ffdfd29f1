//! Public entry points: strategy enumeration, successor teams and
//! satisfaction, with a per-call resource budget.

use std::fmt;
use std::str::FromStr;

use crate::error::EvalError;
use crate::eval::Eval;
use crate::model::{Model, ParamEnv, Team};
use crate::syntax::{BeliefFormula, GameFormula};
use crate::transition::Transition;

/// Which semantics decides `<g> phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    /// Enumerate strategies and inspect their postconditions.
    Reference,
    /// Compute successor teams compositionally (Transition Logic only).
    Transition,
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reference" => Ok(EngineKind::Reference),
            "transition" => Ok(EngineKind::Transition),
            other => Err(format!("unknown engine `{}`", other)),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Reference => "reference",
            EngineKind::Transition => "transition",
        })
    }
}

/// Limits on a single top-level evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of intermediate transitions and teams built.
    pub max_items: u64,
    /// Maximum number of rounds when closing `g*`.
    pub max_star_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_items: 500_000_000,
            max_star_depth: 1024,
        }
    }
}

impl Budget {
    /// Environment variable read by [`Budget::from_env`].
    pub const ENV_VAR: &'static str = "TRANSLOG_BUDGET";

    /// Parses `ITEMS` or `ITEMS,DEPTH`.
    pub fn parse(spec: &str) -> Result<Budget, String> {
        let mut b = Budget::default();
        let mut parts = spec.split(',').map(str::trim);
        let items = parts.next().unwrap_or("");
        b.max_items = items
            .parse()
            .map_err(|_| format!("invalid item budget `{}`", items))?;
        if let Some(depth) = parts.next() {
            b.max_star_depth = depth
                .parse()
                .map_err(|_| format!("invalid depth budget `{}`", depth))?;
        }
        if parts.next().is_some() {
            return Err(format!("invalid budget `{}`", spec));
        }
        if b.max_items == 0 || b.max_star_depth == 0 {
            return Err("budgets must be positive".to_string());
        }
        Ok(b)
    }

    /// The default budget, overridden by `TRANSLOG_BUDGET` when set.
    pub fn from_env() -> Result<Budget, String> {
        match std::env::var(Self::ENV_VAR) {
            Ok(spec) => Budget::parse(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineHandle {
    pub kind: EngineKind,
    pub budget: Budget,
}

impl EngineHandle {
    pub fn new(kind: EngineKind, budget: Budget) -> Self {
        EngineHandle { kind, budget }
    }

    pub fn reference() -> Self {
        Self::new(EngineKind::Reference, Budget::default())
    }

    pub fn transition() -> Self {
        Self::new(EngineKind::Transition, Budget::default())
    }

    pub fn with_budget(self, budget: Budget) -> Self {
        EngineHandle { budget, ..self }
    }
}

/// The strategies of a game with a fixed precondition, deduplicated and in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySet {
    items: Vec<Transition>,
}

impl StrategySet {
    pub(crate) fn from_unsorted(mut items: Vec<Transition>) -> Self {
        items.sort();
        items.dedup();
        StrategySet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transition> {
        self.items.iter()
    }

    pub fn contains(&self, t: &Transition) -> bool {
        self.items.binary_search(t).is_ok()
    }

    /// Distinct postconditions, in canonical order.
    pub fn posts(&self) -> Vec<Team> {
        let mut out: Vec<Team> = self.items.iter().map(Transition::post).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn into_vec(self) -> Vec<Transition> {
        self.items
    }
}

impl IntoIterator for StrategySet {
    type Item = Transition;
    type IntoIter = std::vec::IntoIter<Transition>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

impl<'s> IntoIterator for &'s StrategySet {
    type Item = &'s Transition;
    type IntoIter = std::slice::Iter<'s, Transition>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// `{τ ∈ ‖g‖ : prec(τ) = X}`. Tests inside `game` are decided with `handle`.
pub fn strategies(
    model: &Model,
    game: &GameFormula,
    team: Team,
    env: &ParamEnv,
    handle: &EngineHandle,
) -> Result<StrategySet, EvalError> {
    let mut ev = Eval::new(model, handle);
    let items = ev.strategies(game, team, env)?;
    Ok(StrategySet::from_unsorted(items.to_vec()))
}

/// `M ⊨_τ g`.
pub fn is_strategy(
    model: &Model,
    t: &Transition,
    game: &GameFormula,
    env: &ParamEnv,
    handle: &EngineHandle,
) -> Result<bool, EvalError> {
    Eval::new(model, handle).is_strategy(t, game, env)
}

/// `{Y : M ⊨_{X→Y} g}` in canonical order, for Transition Logic games.
pub fn successors(
    model: &Model,
    game: &GameFormula,
    team: Team,
    env: &ParamEnv,
    handle: &EngineHandle,
) -> Result<Vec<Team>, EvalError> {
    let mut ev = Eval::new(model, handle);
    let mut out = ev.successors(game, team, env)?.to_vec();
    out.sort();
    Ok(out)
}

/// `M ⊨_{X→Y} g`.
pub fn admissible(
    model: &Model,
    from: Team,
    to: Team,
    game: &GameFormula,
    env: &ParamEnv,
    handle: &EngineHandle,
) -> Result<bool, EvalError> {
    let mut ev = Eval::new(model, handle);
    Ok(ev.successors(game, from, env)?.contains(&to))
}

/// `M ⊨_X phi`.
pub fn satisfies(
    model: &Model,
    team: Team,
    phi: &BeliefFormula,
    env: &ParamEnv,
    handle: &EngineHandle,
) -> Result<bool, EvalError> {
    Eval::new(model, handle).satisfies(phi, team, env)
}

/// Default cap on `|Ass_M|` for [`is_true`].
pub const TRUTH_ASSIGNMENT_CAP: usize = 16;

/// `M ⊨_X phi` for every team `X`; refuses models with more than `cap` assignments.
pub fn is_true(
    model: &Model,
    phi: &BeliefFormula,
    handle: &EngineHandle,
    cap: usize,
) -> Result<bool, EvalError> {
    Ok(first_failing_team(model, phi, handle, cap)?.is_none())
}

/// The first team (in canonical order) that does not satisfy `phi`.
pub fn first_failing_team(
    model: &Model,
    phi: &BeliefFormula,
    handle: &EngineHandle,
    cap: usize,
) -> Result<Option<Team>, EvalError> {
    let n = model.assignment_count();
    if n > cap {
        return Err(EvalError::TooManyAssignments {
            assignments: n,
            cap,
        });
    }
    let mut teams: Vec<Team> = model.full_team().subteams().collect();
    teams.sort();
    let env = ParamEnv::new();
    let mut ev = Eval::new(model, handle);
    for x in teams {
        if !ev.satisfies(phi, x, &env)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
