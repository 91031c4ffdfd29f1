//! Successor teams `{Y : M ⊨_{X→Y} g}` computed compositionally.

use std::collections::HashSet;
use std::rc::Rc;

use super::reference::classes;
use super::{key, Eval};
use crate::error::EvalError;
use crate::model::{ParamEnv, Team, VarSet};
use crate::syntax::GameFormula;

impl<'m> Eval<'m> {
    pub(crate) fn successors(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Rc<Vec<Team>>, EvalError> {
        let k = key(g, team, env);
        if let Some(v) = self.succ_memo.get(&k) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.successors_uncached(g, team, env)?);
        self.succ_memo.insert(k, v.clone());
        Ok(v)
    }

    fn successors_uncached(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Vec<Team>, EvalError> {
        use GameFormula as G;
        let m = self.model;
        match g {
            G::Skip => Ok(vec![team]),
            G::Choose(v) => {
                let var = self.var(v)?;
                self.supplements(team, var, VarSet::EMPTY)
            }
            G::Hide(inner, w) => match &**inner {
                G::Choose(v) => {
                    let var = self.var(v)?;
                    let hidden = self.var_set(w)?;
                    self.supplements(team, var, hidden)
                }
                _ => Err(EvalError::OutsideTransitionLogic(format!(
                    "hiding applied to a non-quantifier game: {}",
                    g
                ))),
            },
            G::Universal(v) => {
                let var = self.var(v)?;
                Ok(vec![crate::teams::duplicate(m, team, var)])
            }
            G::Test(phi) => Ok(if self.satisfies(phi, team, env)? {
                vec![team]
            } else {
                Vec::new()
            }),
            G::Seq(a, b) => {
                let mids = self.successors(a, team, env)?;
                let mut seen = HashSet::new();
                for z in mids.iter() {
                    let ys = self.successors(b, *z, env)?;
                    self.charge(ys.len() as u64)?;
                    seen.extend(ys.iter().copied());
                }
                Ok(seen.into_iter().collect())
            }
            G::Choice(a, b) => {
                let mut seen = HashSet::new();
                for x0 in team.subteams() {
                    let left = self.successors(a, x0, env)?;
                    if left.is_empty() {
                        continue;
                    }
                    let rest = team.difference(x0);
                    for extra in x0.subteams() {
                        let right = self.successors(b, rest.union(extra), env)?;
                        self.charge((left.len() * right.len()) as u64)?;
                        for y0 in left.iter() {
                            for y1 in right.iter() {
                                seen.insert(y0.union(*y1));
                            }
                        }
                    }
                }
                Ok(seen.into_iter().collect())
            }
            G::Star(inner) => {
                let mut seen = HashSet::new();
                seen.insert(team);
                let mut frontier = vec![team];
                let mut depth = 0;
                while !frontier.is_empty() {
                    if depth >= self.budget.max_star_depth {
                        return Err(EvalError::BudgetExceeded(format!(
                            "iteration deeper than {} rounds",
                            self.budget.max_star_depth
                        )));
                    }
                    depth += 1;
                    let mut next = Vec::new();
                    for z in frontier {
                        let ys = self.successors(inner, z, env)?;
                        self.charge(ys.len() as u64)?;
                        for y in ys.iter() {
                            if seen.insert(*y) {
                                next.push(*y);
                            }
                        }
                    }
                    frontier = next;
                }
                Ok(seen.into_iter().collect())
            }
            G::Par(..) => Err(EvalError::OutsideTransitionLogic(format!(
                "parallel composition: {}",
                g
            ))),
        }
    }

    /// All `X[F/v]` with `F` constant on each `≡_W` class of `team`.
    fn supplements(&mut self, team: Team, var: usize, hidden: VarSet) -> Result<Vec<Team>, EvalError> {
        let m = self.model;
        let options = (1u32 << m.domain_size()) - 1;
        let mut partial: HashSet<Team> = HashSet::new();
        partial.insert(Team::EMPTY);
        for class in classes(m, team, hidden) {
            let pieces: Vec<Team> = (1..=options)
                .map(|mask| {
                    let mut t = Team::EMPTY;
                    for s in class {
                        for v in (0..m.domain_size()).filter(|&v| mask >> v & 1 == 1) {
                            t.insert(m.extend(s, var, v));
                        }
                    }
                    t
                })
                .collect();
            self.charge((partial.len() * pieces.len()) as u64)?;
            partial = partial
                .iter()
                .flat_map(|p| pieces.iter().map(move |q| p.union(*q)))
                .collect();
        }
        Ok(partial.into_iter().collect())
    }
}
