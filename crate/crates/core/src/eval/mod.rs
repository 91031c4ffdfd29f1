//! The evaluator shared by both engines.
//!
//! One `Eval` lives for one top-level call. Its memo tables are keyed by the
//! address of a formula node, so they must not outlive the borrowed formula.

mod reference;
mod successors;

use std::collections::HashMap;
use std::rc::Rc;

use crate::engine::{Budget, EngineHandle, EngineKind};
use crate::error::EvalError;
use crate::model::{Assignment, Element, Model, ParamEnv, Team, VarSet};
use crate::syntax::{BeliefFormula, GameFormula};
use crate::term::{eval_term, eval_terms, Term};
use crate::transition::Transition;

type Key = (usize, Team, ParamEnv);

fn key<T>(node: &T, team: Team, env: &ParamEnv) -> Key {
    (node as *const T as usize, team, env.clone())
}

pub(crate) struct Eval<'m> {
    model: &'m Model,
    kind: EngineKind,
    budget: Budget,
    spent: u64,
    sat_memo: HashMap<Key, bool>,
    strat_memo: HashMap<Key, Rc<Vec<Transition>>>,
    succ_memo: HashMap<Key, Rc<Vec<Team>>>,
}

impl<'m> Eval<'m> {
    pub(crate) fn new(model: &'m Model, handle: &EngineHandle) -> Self {
        Eval {
            model,
            kind: handle.kind,
            budget: handle.budget,
            spent: 0,
            sat_memo: HashMap::new(),
            strat_memo: HashMap::new(),
            succ_memo: HashMap::new(),
        }
    }

    fn charge(&mut self, n: u64) -> Result<(), EvalError> {
        self.spent += n;
        if self.spent > self.budget.max_items {
            return Err(EvalError::BudgetExceeded(format!(
                "more than {} intermediate items",
                self.budget.max_items
            )));
        }
        Ok(())
    }

    fn var(&self, name: &str) -> Result<usize, EvalError> {
        self.model
            .var_index(name)
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }

    fn var_set(&self, names: &std::collections::BTreeSet<String>) -> Result<VarSet, EvalError> {
        names.iter().map(|v| self.var(v)).collect()
    }

    fn value(&self, t: &Term, s: Assignment, env: &ParamEnv) -> Result<Element, EvalError> {
        eval_term(t, s, env, self.model)
    }

    fn values(&self, ts: &[Term], s: Assignment, env: &ParamEnv) -> Result<Vec<Element>, EvalError> {
        eval_terms(ts, s, env, self.model)
    }

    fn tuple_rows(
        &self,
        ts: &[Term],
        team: Team,
        env: &ParamEnv,
    ) -> Result<Vec<Vec<Element>>, EvalError> {
        team.iter().map(|s| self.values(ts, s, env)).collect()
    }

    pub(crate) fn satisfies(
        &mut self,
        phi: &BeliefFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<bool, EvalError> {
        let k = key(phi, team, env);
        if let Some(&v) = self.sat_memo.get(&k) {
            return Ok(v);
        }
        let v = self.satisfies_uncached(phi, team, env)?;
        self.sat_memo.insert(k, v);
        Ok(v)
    }

    fn satisfies_uncached(
        &mut self,
        phi: &BeliefFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<bool, EvalError> {
        use BeliefFormula as B;
        let m = self.model;
        Ok(match phi {
            B::Top => true,
            B::Bot => team.is_empty(),
            B::Rel(r, ts) | B::NegRel(r, ts) => {
                let rel = m
                    .relation(r)
                    .ok_or_else(|| EvalError::MalformedTerm(format!("unknown relation `{}`", r)))?;
                let want = matches!(phi, B::Rel(..));
                let mut ok = true;
                for s in team {
                    if rel.tuples.contains(&self.values(ts, s, env)?) != want {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Eq(a, b) | B::Neq(a, b) => {
                let want = matches!(phi, B::Eq(..));
                let mut ok = true;
                for s in team {
                    if (self.value(a, s, env)? == self.value(b, s, env)?) != want {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Not(a) => !self.satisfies(a, team, env)?,
            B::Exists(p, a) => {
                let mut ok = false;
                for v in m.domain() {
                    if self.satisfies(a, team, &env.bind(p, v))? {
                        ok = true;
                        break;
                    }
                }
                ok
            }
            B::Forall(p, a) => {
                let mut ok = true;
                for v in m.domain() {
                    if !self.satisfies(a, team, &env.bind(p, v))? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Or(a, b) => self.satisfies(a, team, env)? || self.satisfies(b, team, env)?,
            B::And(a, b) => self.satisfies(a, team, env)? && self.satisfies(b, team, env)?,
            B::Implies(a, b) => !self.satisfies(a, team, env)? || self.satisfies(b, team, env)?,
            B::Iff(a, b) => self.satisfies(a, team, env)? == self.satisfies(b, team, env)?,
            B::Diamond(g, a) => {
                let mut ok = false;
                for y in self.targets(g, team, env)?.iter() {
                    if self.satisfies(a, *y, env)? {
                        ok = true;
                        break;
                    }
                }
                ok
            }
            B::Square(g, a) => {
                let mut ok = true;
                for y in self.targets(g, team, env)?.iter() {
                    if !self.satisfies(a, *y, env)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Tensor(a, b) => self.tensor(a, b, team, env)?,
            B::TupleNeq(a, b) => {
                let mut ok = true;
                for s in team {
                    if self.values(a, s, env)? == self.values(b, s, env)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Announce(t, a) => {
                let mut slices = vec![Team::EMPTY; m.domain_size()];
                for s in team {
                    slices[self.value(t, s, env)?].insert(s);
                }
                let mut ok = true;
                for slice in slices {
                    if !self.satisfies(a, slice, env)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Dep(ts) => {
                let rows = self.tuple_rows(ts, team, env)?;
                let mut seen: HashMap<&[Element], Element> = HashMap::new();
                let mut ok = true;
                for row in &rows {
                    let Some((last, init)) = row.split_last() else {
                        continue;
                    };
                    if *seen.entry(init).or_insert(*last) != *last {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::Inc(a, b) => {
                let left = self.tuple_rows(a, team, env)?;
                let right = self.tuple_rows(b, team, env)?;
                left.iter().all(|row| right.contains(row))
            }
            B::Exc(a, b) => {
                let left = self.tuple_rows(a, team, env)?;
                let right = self.tuple_rows(b, team, env)?;
                left.iter().all(|row| !right.contains(row))
            }
            B::Indep(a, b, c) => {
                let mut rows = Vec::new();
                for s in team {
                    rows.push((
                        self.values(a, s, env)?,
                        self.values(b, s, env)?,
                        self.values(c, s, env)?,
                    ));
                }
                rows.iter().all(|(a1, b1, _)| {
                    rows.iter().filter(|(a2, _, _)| a2 == a1).all(|(_, _, c2)| {
                        rows.iter()
                            .any(|(a3, b3, c3)| a3 == a1 && b3 == b1 && c3 == c2)
                    })
                })
            }
            B::SubDiamond(a) => {
                let mut ok = false;
                for y in team.subteams() {
                    if self.satisfies(a, y, env)? {
                        ok = true;
                        break;
                    }
                }
                ok
            }
            B::SubSquare(a) => {
                let mut ok = true;
                for y in team.subteams() {
                    if !self.satisfies(a, y, env)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            B::IntImplies(a, b) => {
                let mut ok = true;
                for y in team.subteams() {
                    if self.satisfies(a, y, env)? && !self.satisfies(b, y, env)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        })
    }

    /// `X = Y ∪ Z` with `Y ⊨ a`, `Z ⊨ b`.
    fn tensor(
        &mut self,
        a: &BeliefFormula,
        b: &BeliefFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<bool, EvalError> {
        for y in team.subteams() {
            if !self.satisfies(a, y, env)? {
                continue;
            }
            let rest = team.difference(y);
            for extra in y.subteams() {
                if self.satisfies(b, rest.union(extra), env)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Teams reachable through `g` from `team`, according to the engine kind.
    fn targets(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Rc<Vec<Team>>, EvalError> {
        match self.kind {
            EngineKind::Transition => self.successors(g, team, env),
            EngineKind::Reference => {
                let strategies = self.strategies(g, team, env)?;
                let mut posts: Vec<Team> = strategies.iter().map(Transition::post).collect();
                posts.sort_unstable_by_key(|t| t.bits());
                posts.dedup();
                Ok(Rc::new(posts))
            }
        }
    }
}
