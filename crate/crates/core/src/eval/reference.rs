//! Strategy enumeration: `‖g‖` restricted to a fixed precondition.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use rustc_hash::FxHashSet;

use super::{key, Eval};
use crate::error::EvalError;
use crate::model::{Element, ParamEnv, Team, VarSet};
use crate::syntax::GameFormula;
use crate::transition::Transition;

/// Splits `team` into `≡_W` classes, ordered by smallest member.
pub(super) fn classes(model: &crate::model::Model, team: Team, hidden: VarSet) -> Vec<Team> {
    let mut keys: Vec<usize> = Vec::new();
    let mut out: Vec<Team> = Vec::new();
    for s in team {
        let k = model.class_key(s, &hidden);
        match keys.iter().position(|&x| x == k) {
            Some(i) => out[i].insert(s),
            None => {
                keys.push(k);
                out.push(Team::singleton(s));
            }
        }
    }
    out
}

impl<'m> Eval<'m> {
    pub(crate) fn strategies(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Rc<Vec<Transition>>, EvalError> {
        let k = key(g, team, env);
        if let Some(v) = self.strat_memo.get(&k) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.strategies_uncached(g, team, env)?);
        self.strat_memo.insert(k, v.clone());
        Ok(v)
    }

    fn strategies_uncached(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Vec<Transition>, EvalError> {
        use GameFormula as G;
        let m = self.model;
        match g {
            G::Skip => Ok(vec![Transition::identity(team)]),
            G::Choose(v) => {
                let var = self.var(v)?;
                self.choice_functions(team, var, VarSet::EMPTY)
            }
            G::Hide(inner, w) if matches!(**inner, G::Choose(_)) => {
                let G::Choose(v) = &**inner else { unreachable!() };
                let var = self.var(v)?;
                let hidden = self.var_set(w)?;
                self.choice_functions(team, var, hidden)
            }
            G::Universal(v) => {
                let var = self.var(v)?;
                self.charge(1)?;
                let images = team.iter().map(|s| m.extend_all(s, var)).collect();
                Ok(vec![Transition::from_parts(team, images)])
            }
            G::Test(phi) => {
                if self.satisfies(phi, team, env)? {
                    Ok(vec![Transition::identity(team)])
                } else {
                    Ok(Vec::new())
                }
            }
            G::Seq(a, b) => {
                let firsts = self.strategies(a, team, env)?;
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for t in firsts.iter() {
                    let seconds = self.strategies(b, t.post(), env)?;
                    self.charge(seconds.len() as u64)?;
                    for u in seconds.iter() {
                        let c = t.then(u);
                        if seen.insert(c.clone()) {
                            out.push(c);
                        }
                    }
                }
                Ok(out)
            }
            G::Choice(a, b) => {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for x0 in team.subteams() {
                    let left = self.strategies(a, x0, env)?;
                    if left.is_empty() {
                        continue;
                    }
                    let rest = team.difference(x0);
                    for extra in x0.subteams() {
                        let right = self.strategies(b, rest.union(extra), env)?;
                        self.charge((left.len() * right.len()) as u64)?;
                        for t in left.iter() {
                            for u in right.iter() {
                                let c = t.union(u);
                                if seen.insert(c.clone()) {
                                    out.push(c);
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            G::Hide(inner, w) => {
                let hidden = self.var_set(w)?;
                let all = self.strategies(inner, team, env)?;
                Ok(all
                    .iter()
                    .filter(|t| t.is_independent(m, &hidden))
                    .cloned()
                    .collect())
            }
            G::Star(inner) => self.star_strategies(inner, team, env),
            G::Par(a, b) => {
                let aff_a = a.affected_in(m);
                let aff_b = b.affected_in(m);
                let left = self.strategies(a, team, env)?;
                let right = self.strategies(b, team, env)?;
                self.charge((left.len() * right.len()) as u64)?;
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for t in left.iter() {
                    for u in right.iter() {
                        let c = Transition::parallel(m, t, u, aff_a, aff_b)?;
                        if seen.insert(c.clone()) {
                            out.push(c);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// `τ_{ε,X} ∘ τ₀ ∘ … ∘ τ_{n−1}` for all chains of strategies of `g`.
    fn star_strategies(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Vec<Transition>, EvalError> {
        if self.model.assignment_count() <= 16 {
            return self.star_packed(g, team, env);
        }
        let start = Transition::identity(team);
        let mut seen: HashSet<Transition> = HashSet::new();
        seen.insert(start.clone());
        let mut out = vec![start.clone()];
        let mut frontier = vec![start];
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
            for t in &frontier {
                let steps = self.strategies(g, t.post(), env)?;
                self.charge(steps.len() as u64)?;
                for u in steps.iter() {
                    let c = t.then(u);
                    if seen.insert(c.clone()) {
                        out.push(c.clone());
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    /// The same closure with transitions packed as 16 image masks indexed by
    /// assignment; composition is then a few bit operations.
    fn star_packed(
        &mut self,
        g: &GameFormula,
        team: Team,
        env: &ParamEnv,
    ) -> Result<Vec<Transition>, EvalError> {
        type Packed = [u16; 16];
        fn pack(t: &Transition) -> Packed {
            let mut p = [0u16; 16];
            for (s, img) in t.iter() {
                p[s.index()] = img.bits() as u16;
            }
            p
        }
        fn post(p: &Packed) -> u16 {
            p.iter().fold(0, |acc, img| acc | img)
        }
        let members: Vec<usize> = team.iter().map(|s| s.index()).collect();
        let start = pack(&Transition::identity(team));
        let mut steps_at: HashMap<u16, Rc<Vec<Packed>>> = HashMap::new();
        let mut seen: FxHashSet<Packed> = FxHashSet::default();
        seen.insert(start);
        let mut out = vec![start];
        let mut frontier = vec![start];
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
            for t in &frontier {
                let y = post(t);
                let steps = match steps_at.get(&y) {
                    Some(steps) => steps.clone(),
                    None => {
                        let found = self.strategies(g, Team::from_bits(y as u128), env)?;
                        let packed = Rc::new(found.iter().map(pack).collect::<Vec<_>>());
                        steps_at.insert(y, packed.clone());
                        packed
                    }
                };
                self.charge(steps.len() as u64)?;
                for u in steps.iter() {
                    let mut c = [0u16; 16];
                    for &s in &members {
                        let mut bits = t[s];
                        while bits != 0 {
                            c[s] |= u[bits.trailing_zeros() as usize];
                            bits &= bits - 1;
                        }
                    }
                    if seen.insert(c) {
                        out.push(c);
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        Ok(out
            .iter()
            .map(|p| {
                let images = members.iter().map(|&s| Team::from_bits(p[s] as u128)).collect();
                Transition::from_parts(team, images)
            })
            .collect())
    }

    /// All `τ_{F,X}` for `#v`, with `F` constant on each `≡_W` class.
    fn choice_functions(
        &mut self,
        team: Team,
        var: usize,
        hidden: VarSet,
    ) -> Result<Vec<Transition>, EvalError> {
        let m = self.model;
        let classes = classes(m, team, hidden);
        let options = (1u32 << m.domain_size()) - 1;
        let total = (options as u64).checked_pow(classes.len() as u32);
        match total {
            Some(n) => self.charge(n)?,
            None => self.charge(u64::MAX / 2)?,
        }
        let members: Vec<_> = team.iter().collect();
        let class_of: Vec<usize> = members
            .iter()
            .map(|&s| classes.iter().position(|c| c.contains(s)).unwrap())
            .collect();
        // picks[i] in 1..=options is a bitmask of values for class i
        let mut picks = vec![1u32; classes.len()];
        let mut out = Vec::new();
        loop {
            let images = members
                .iter()
                .zip(&class_of)
                .map(|(&s, &c)| {
                    (0..m.domain_size())
                        .filter(|&v| picks[c] >> v & 1 == 1)
                        .map(|v| m.extend(s, var, v))
                        .collect()
                })
                .collect();
            out.push(Transition::from_parts(team, images));
            let mut i = 0;
            loop {
                if i == picks.len() {
                    return Ok(out);
                }
                if picks[i] < options {
                    picks[i] += 1;
                    break;
                }
                picks[i] = 1;
                i += 1;
            }
        }
    }

    pub(crate) fn is_strategy(
        &mut self,
        t: &Transition,
        g: &GameFormula,
        env: &ParamEnv,
    ) -> Result<bool, EvalError> {
        use GameFormula as G;
        let m = self.model;
        let team = t.prec();
        match g {
            G::Skip => Ok(*t == Transition::identity(team)),
            G::Test(phi) => {
                Ok(*t == Transition::identity(team) && self.satisfies(phi, team, env)?)
            }
            G::Universal(v) => {
                let var = self.var(v)?;
                Ok(t.iter().all(|(s, img)| img == m.extend_all(s, var)))
            }
            G::Choose(v) => {
                let var = self.var(v)?;
                Ok(t.iter().all(|(s, img)| img.is_subset(m.extend_all(s, var))))
            }
            G::Hide(inner, w) if matches!(**inner, G::Choose(_)) => {
                let G::Choose(v) = &**inner else { unreachable!() };
                let var = self.var(v)?;
                let hidden = self.var_set(w)?;
                if !t.iter().all(|(s, img)| img.is_subset(m.extend_all(s, var))) {
                    return Ok(false);
                }
                let value_set = |img: Team| -> BTreeSet<Element> {
                    img.iter().map(|s| m.value(s, var)).collect()
                };
                for class in classes(m, team, hidden) {
                    let mut sets = class.iter().map(|s| value_set(t.get(s).unwrap()));
                    let first = sets.next().unwrap();
                    if sets.any(|v| v != first) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            G::Hide(inner, w) => {
                let hidden = self.var_set(w)?;
                Ok(t.is_independent(m, &hidden) && self.is_strategy(t, inner, env)?)
            }
            _ => Ok(self.strategies(g, team, env)?.contains(t)),
        }
    }
}
