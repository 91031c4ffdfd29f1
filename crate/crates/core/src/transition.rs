//! Transitions (partial maps from assignments to nonempty teams) and games
//! given explicitly as sets of transitions.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{Assignment, Model, Team, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("transition maps assignment #{0} to the empty team")]
    EmptyImage(usize),
    #[error("assignment #{0} listed twice in transition")]
    DuplicateKey(usize),
    #[error("non-composable transitions: postcondition differs from precondition")]
    NonComposable,
    #[error("invalid parallel composition: {0}")]
    InvalidParallel(&'static str),
}

/// A transition `τ`. Images are stored in ascending order of the
/// precondition's members; equality is extensional.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    prec: Team,
    images: Vec<Team>,
}

impl std::fmt::Debug for Transition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

impl Transition {
    pub fn new<I>(entries: I) -> Result<Self, TransitionError>
    where
        I: IntoIterator<Item = (Assignment, Team)>,
    {
        let mut pairs: Vec<(Assignment, Team)> = entries.into_iter().collect();
        pairs.sort_by_key(|(s, _)| *s);
        let mut prec = Team::EMPTY;
        for (s, img) in &pairs {
            if img.is_empty() {
                return Err(TransitionError::EmptyImage(s.index()));
            }
            if prec.contains(*s) {
                return Err(TransitionError::DuplicateKey(s.index()));
            }
            prec.insert(*s);
        }
        Ok(Transition {
            prec,
            images: pairs.into_iter().map(|(_, t)| t).collect(),
        })
    }

    /// Builds from images aligned with `prec`'s members; images must be nonempty.
    pub(crate) fn from_parts(prec: Team, images: Vec<Team>) -> Self {
        debug_assert_eq!(prec.len(), images.len());
        debug_assert!(images.iter().all(|t| !t.is_empty()));
        Transition { prec, images }
    }

    /// `τ_{ε,X}`: every `s ∈ X` maps to `{s}`.
    pub fn identity(team: Team) -> Self {
        Transition {
            prec: team,
            images: team.iter().map(Team::singleton).collect(),
        }
    }

    pub fn prec(&self) -> Team {
        self.prec
    }

    /// Union of all images.
    pub fn post(&self) -> Team {
        self.images.iter().fold(Team::EMPTY, |acc, &t| acc.union(t))
    }

    pub fn get(&self, s: Assignment) -> Option<Team> {
        if self.prec.contains(s) {
            Some(self.images[self.prec.rank(s)])
        } else {
            None
        }
    }

    pub fn images(&self) -> &[Team] {
        &self.images
    }

    pub fn iter(&self) -> impl Iterator<Item = (Assignment, Team)> + '_ {
        self.prec.iter().zip(self.images.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `τ ∘ τ'`: first `self`, then `next`; requires `post(self) = prec(next)`.
    pub fn compose(&self, next: &Transition) -> Result<Transition, TransitionError> {
        if self.post() != next.prec {
            return Err(TransitionError::NonComposable);
        }
        Ok(self.then(next))
    }

    /// Composition without the strict postcondition check; `next` must be
    /// defined on all of `post(self)`.
    pub(crate) fn then(&self, next: &Transition) -> Transition {
        let images = self
            .images
            .iter()
            .map(|img| {
                img.iter().fold(Team::EMPTY, |acc, s| {
                    acc.union(next.images[next.prec.rank(s)])
                })
            })
            .collect();
        Transition {
            prec: self.prec,
            images,
        }
    }

    /// `τ₀ ∪ τ₁`: pointwise union over the union of preconditions.
    pub fn union(&self, other: &Transition) -> Transition {
        let prec = self.prec.union(other.prec);
        let images = prec
            .iter()
            .map(|s| {
                let a = self.get(s).unwrap_or(Team::EMPTY);
                let b = other.get(s).unwrap_or(Team::EMPTY);
                a.union(b)
            })
            .collect();
        Transition { prec, images }
    }

    /// `τ₀ (v̄₀ ‖ v̄₁) τ₁`: each output takes `v̄₀` from a `τ₀`-successor and
    /// `v̄₁` from a `τ₁`-successor of the same input.
    pub fn parallel(
        model: &Model,
        left: &Transition,
        right: &Transition,
        left_vars: VarSet,
        right_vars: VarSet,
    ) -> Result<Transition, TransitionError> {
        if left.prec != right.prec {
            return Err(TransitionError::InvalidParallel("preconditions differ"));
        }
        if !left_vars.is_disjoint(right_vars) {
            return Err(TransitionError::InvalidParallel("variable tuples overlap"));
        }
        let images = left
            .prec
            .iter()
            .zip(left.images.iter().zip(&right.images))
            .map(|(s, (&img0, &img1))| {
                let mut out = Team::EMPTY;
                for s0 in img0.iter() {
                    let base = left_vars
                        .iter()
                        .fold(s, |acc, v| model.extend(acc, v, model.value(s0, v)));
                    for s1 in img1.iter() {
                        let t = right_vars
                            .iter()
                            .fold(base, |acc, v| model.extend(acc, v, model.value(s1, v)));
                        out.insert(t);
                    }
                }
                out
            })
            .collect();
        Ok(Transition {
            prec: left.prec,
            images,
        })
    }

    /// `s ≡_W s' ⇒ τ(s) = τ(s')` for all `s, s'` in the precondition.
    pub fn is_independent(&self, model: &Model, hidden: &VarSet) -> bool {
        if hidden.is_empty() {
            return true;
        }
        let mut seen: Vec<(usize, Team)> = Vec::new();
        for (s, img) in self.iter() {
            let key = model.class_key(s, hidden);
            match seen.iter().find(|(k, _)| *k == key) {
                Some((_, t)) if *t != img => return false,
                Some(_) => {}
                None => seen.push((key, img)),
            }
        }
        true
    }

    /// One line per entry: `x=0 y=0 => {x=0 y=0 | x=1 y=0}`.
    pub fn render(&self, model: &Model) -> String {
        let mut out = String::new();
        for (s, img) in self.iter() {
            let targets: Vec<String> = img.iter().map(|t| model.display_assignment(t)).collect();
            out.push_str(&model.display_assignment(s));
            out.push_str(" => {");
            out.push_str(&targets.join(" | "));
            out.push_str("}\n");
        }
        out
    }
}

/// A game in transition-set form. May be empty.
pub type ExplicitGame = BTreeSet<Transition>;

/// `G/W`: the transitions of `G` independent on `W`.
pub fn hide_game(model: &Model, game: &ExplicitGame, hidden: &VarSet) -> ExplicitGame {
    game.iter()
        .filter(|t| t.is_independent(model, hidden))
        .cloned()
        .collect()
}

/// `G ; G'`: `τ ∘ τ'` for every composable pair.
pub fn concat_game(first: &ExplicitGame, second: &ExplicitGame) -> ExplicitGame {
    let mut out = ExplicitGame::new();
    for t in first {
        let post = t.post();
        for u in second.iter().filter(|u| u.prec() == post) {
            out.insert(t.then(u));
        }
    }
    out
}

/// `G₀ ∪ G₁`: `τ₀ ∪ τ₁` for every pair.
pub fn choice_game(left: &ExplicitGame, right: &ExplicitGame) -> ExplicitGame {
    let mut out = ExplicitGame::new();
    for t in left {
        for u in right {
            out.insert(t.union(u));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> Model {
        Model::new(2, &["x", "y"]).unwrap()
    }

    fn a(m: &Model, x: usize, y: usize) -> Assignment {
        m.assignment(&[x, y]).unwrap()
    }

    fn team(m: &Model, pts: &[(usize, usize)]) -> Team {
        pts.iter().map(|&(x, y)| a(m, x, y)).collect()
    }

    #[test]
    fn rejects_empty_images_and_duplicates() {
        let m = m2();
        let s = a(&m, 0, 0);
        assert_eq!(
            Transition::new([(s, Team::EMPTY)]),
            Err(TransitionError::EmptyImage(0))
        );
        let t = Team::singleton(s);
        assert_eq!(
            Transition::new([(s, t), (s, t)]),
            Err(TransitionError::DuplicateKey(0))
        );
    }

    #[test]
    fn compose_unfolds_union() {
        let m = m2();
        let s00 = a(&m, 0, 0);
        let s01 = a(&m, 0, 1);
        let tau = Transition::new([(s00, team(&m, &[(0, 0), (0, 1)]))]).unwrap();
        let tau2 = Transition::new([
            (s00, team(&m, &[(1, 0)])),
            (s01, team(&m, &[(1, 1)])),
        ])
        .unwrap();
        let c = tau.compose(&tau2).unwrap();
        assert_eq!(c.get(s00), Some(team(&m, &[(1, 0), (1, 1)])));
        assert_eq!(c.prec(), Team::singleton(s00));
        assert_eq!(tau2.compose(&tau), Err(TransitionError::NonComposable));
        let id = Transition::identity(tau.prec());
        assert_eq!(id.compose(&tau).unwrap(), tau);
    }

    #[test]
    fn union_cases() {
        let m = m2();
        let s = a(&m, 0, 0);
        let t0 = Transition::new([(s, team(&m, &[(1, 0)]))]).unwrap();
        let t1 = Transition::new([(s, team(&m, &[(1, 1)]))]).unwrap();
        assert_eq!(t0.union(&t0), t0);
        assert_eq!(t0.union(&t1).get(s), Some(team(&m, &[(1, 0), (1, 1)])));
        let t2 = Transition::new([(a(&m, 1, 1), team(&m, &[(0, 0)]))]).unwrap();
        let u = t0.union(&t2);
        assert_eq!(u.len(), 2);
        assert_eq!(u.get(s), t0.get(s));
    }

    #[test]
    fn independence_examples() {
        let m = m2();
        let x = VarSet::singleton(0);
        let s0 = a(&m, 0, 0);
        let s1 = a(&m, 1, 0);
        let id = Transition::new([(s0, Team::singleton(s0)), (s1, Team::singleton(s1))]).unwrap();
        assert!(id.is_independent(&m, &VarSet::EMPTY));
        assert!(!id.is_independent(&m, &x));
        let constant =
            Transition::new([(s0, Team::singleton(s0)), (s1, Team::singleton(s0))]).unwrap();
        assert!(constant.is_independent(&m, &x));
    }

    #[test]
    fn parallel_with_empty_right_tuple() {
        let m = m2();
        let s = a(&m, 0, 0);
        let t0 = Transition::new([(s, team(&m, &[(1, 1)]))]).unwrap();
        let t1 = Transition::new([(s, team(&m, &[(0, 1)]))]).unwrap();
        let p = Transition::parallel(&m, &t0, &t1, VarSet::singleton(0), VarSet::EMPTY).unwrap();
        assert_eq!(p.get(s), Some(team(&m, &[(1, 0)])));
        let bad = Transition::parallel(&m, &t0, &t1, VarSet::singleton(0), VarSet::singleton(0));
        assert!(bad.is_err());
    }

    #[test]
    fn rendering() {
        let m = m2();
        let t = Transition::new([(a(&m, 0, 0), team(&m, &[(0, 0), (1, 0)]))]).unwrap();
        assert_eq!(t.render(&m), "x=0 y=0 => {x=0 y=0 | x=1 y=0}\n");
    }

    #[test]
    fn singleton_choice_game() {
        let m = m2();
        let ta = Transition::identity(team(&m, &[(0, 0)]));
        let tb = Transition::identity(team(&m, &[(1, 1)]));
        let g = choice_game(&[ta.clone()].into(), &[tb.clone()].into());
        assert_eq!(g, [ta.union(&tb)].into());
    }
}
