//! Team-building primitives shared by both semantics.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::EvalError;
use crate::model::{Assignment, Element, Model, ParamEnv, Team};
use crate::term::{eval_term, Term};

/// A choice function `F`: every assignment of a team gets a nonempty set of values.
pub type ChoiceFunction = BTreeMap<Assignment, BTreeSet<Element>>;

/// `s[F/v] = {s[m/v] : m ∈ values}`.
pub fn update_with(model: &Model, s: Assignment, var: usize, values: &BTreeSet<Element>) -> Team {
    values.iter().map(|&m| model.extend(s, var, m)).collect()
}

/// `X[F/v]`.
pub fn supplement(
    model: &Model,
    team: Team,
    var: usize,
    choice: &ChoiceFunction,
) -> Result<Team, EvalError> {
    if let Some(extra) = choice.keys().find(|s| !team.contains(**s)) {
        return Err(EvalError::InvalidChoiceFunction(format!(
            "defined outside the team at {}",
            model.display_assignment(*extra)
        )));
    }
    let mut out = Team::EMPTY;
    for s in team {
        let values = choice.get(&s).ok_or_else(|| {
            EvalError::InvalidChoiceFunction(format!(
                "undefined at {}",
                model.display_assignment(s)
            ))
        })?;
        if values.is_empty() {
            return Err(EvalError::InvalidChoiceFunction(format!(
                "empty value set at {}",
                model.display_assignment(s)
            )));
        }
        if let Some(&m) = values.iter().find(|&&m| m >= model.domain_size()) {
            return Err(EvalError::InvalidChoiceFunction(format!(
                "element {} out of range",
                m
            )));
        }
        out = out.union(update_with(model, s, var, values));
    }
    Ok(out)
}

/// `X[M/v]`.
pub fn duplicate(model: &Model, team: Team, var: usize) -> Team {
    team.iter()
        .fold(Team::EMPTY, |acc, s| acc.union(model.extend_all(s, var)))
}

/// `X_{|t=m} = {s ∈ X : t⟨s⟩ = m}`.
pub fn restrict(
    model: &Model,
    team: Team,
    term: &Term,
    m: Element,
    env: &ParamEnv,
) -> Result<Team, EvalError> {
    let mut out = Team::EMPTY;
    for s in team {
        if eval_term(term, s, env, model)? == m {
            out.insert(s);
        }
    }
    Ok(out)
}
