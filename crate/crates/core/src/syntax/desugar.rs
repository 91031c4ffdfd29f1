//! Rewriting sugared belief connectives into the core language.
//!
//! Every rewrite introduces parameter variables from the reserved `$k`
//! namespace. [`desugar`] rewrites the root until it is a core node and then
//! descends, so fresh names are numbered outermost first.

use super::{BeliefFormula, GameFormula};
use crate::term::Term;

use BeliefFormula as B;

/// Deterministic supply of fresh parameter names `$1, $2, ...`.
#[derive(Debug, Clone)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    /// Starts after the largest `$k` already used in `phi`.
    pub fn for_formula(phi: &BeliefFormula) -> Self {
        let mut max = 0;
        visit_params(phi, &mut |p| {
            if let Some(k) = p.strip_prefix('$').and_then(|n| n.parse::<usize>().ok()) {
                max = max.max(k);
            }
        });
        Fresh { next: max + 1 }
    }

    pub fn starting_at(next: usize) -> Self {
        Fresh { next }
    }

    pub fn next_name(&mut self) -> String {
        let name = format!("${}", self.next);
        self.next += 1;
        name
    }

    fn tuple(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.next_name()).collect()
    }
}

fn visit_params(phi: &BeliefFormula, f: &mut dyn FnMut(&str)) {
    let terms = |ts: &[Term], f: &mut dyn FnMut(&str)| {
        for t in ts {
            let mut ps = Vec::new();
            t.params(&mut ps);
            ps.into_iter().for_each(&mut *f);
        }
    };
    match phi {
        B::Top | B::Bot => {}
        B::Rel(_, ts) | B::NegRel(_, ts) | B::Dep(ts) => terms(ts, f),
        B::Eq(a, b) | B::Neq(a, b) => terms(&[a.clone(), b.clone()], f),
        B::TupleNeq(a, b) | B::Inc(a, b) | B::Exc(a, b) => {
            terms(a, f);
            terms(b, f);
        }
        B::Indep(a, b, c) => {
            terms(a, f);
            terms(b, f);
            terms(c, f);
        }
        B::Announce(t, a) => {
            terms(std::slice::from_ref(t), f);
            visit_params(a, f);
        }
        B::Exists(p, a) | B::Forall(p, a) => {
            f(p);
            visit_params(a, f);
        }
        B::Not(a) | B::SubDiamond(a) | B::SubSquare(a) => visit_params(a, f),
        B::Or(a, b)
        | B::And(a, b)
        | B::Implies(a, b)
        | B::Iff(a, b)
        | B::Tensor(a, b)
        | B::IntImplies(a, b) => {
            visit_params(a, f);
            visit_params(b, f);
        }
        B::Diamond(g, a) | B::Square(g, a) => {
            visit_game_params(g, f);
            visit_params(a, f);
        }
    }
}

fn visit_game_params(g: &GameFormula, f: &mut dyn FnMut(&str)) {
    match g {
        GameFormula::Skip | GameFormula::Choose(_) | GameFormula::Universal(_) => {}
        GameFormula::Seq(a, b) | GameFormula::Choice(a, b) | GameFormula::Par(a, b) => {
            visit_game_params(a, f);
            visit_game_params(b, f);
        }
        GameFormula::Test(phi) => visit_params(phi, f),
        GameFormula::Hide(g, _) | GameFormula::Star(g) => visit_game_params(g, f),
    }
}

fn not(a: BeliefFormula) -> BeliefFormula {
    B::not(a)
}

fn params(names: &[String]) -> Vec<Term> {
    names.iter().map(|p| Term::param(p)).collect()
}

fn forall_all(names: &[String], body: BeliefFormula) -> BeliefFormula {
    names
        .iter()
        .rev()
        .fold(body, |acc, p| B::forall(p, acc))
}

/// `(a1..an) != (b1..bn)` as a left-nested tensor of coordinate inequalities.
fn tuple_neq(a: &[Term], b: &[Term]) -> BeliefFormula {
    let mut pairs = a.iter().zip(b);
    let first = match pairs.next() {
        Some((x, y)) => B::neq(x.clone(), y.clone()),
        None => return B::Top,
    };
    pairs.fold(first, |acc, (x, y)| B::tensor(acc, B::neq(x.clone(), y.clone())))
}

fn announce_all(ts: &[Term], body: BeliefFormula) -> BeliefFormula {
    ts.iter()
        .rev()
        .fold(body, |acc, t| B::Announce(t.clone(), Box::new(acc)))
}

/// One rewrite step at the root, or `None` when the root is already core
/// (or one of the `<sub>`/`[sub]` primitives).
pub fn expand_once(phi: &BeliefFormula, fresh: &mut Fresh) -> Option<BeliefFormula> {
    let out = match phi {
        B::Bot => {
            let p = fresh.next_name();
            B::exists(&p, B::neq(Term::param(&p), Term::param(&p)))
        }
        B::And(a, b) => not(B::or(not((**a).clone()), not((**b).clone()))),
        B::Implies(a, b) => B::or(not((**a).clone()), (**b).clone()),
        B::Iff(a, b) => B::and(
            B::implies((**a).clone(), (**b).clone()),
            B::implies((**b).clone(), (**a).clone()),
        ),
        B::Forall(p, a) => not(B::exists(p, not((**a).clone()))),
        B::Square(g, a) => not(B::diamond((**g).clone(), not((**a).clone()))),
        B::Tensor(a, b) => B::diamond(
            GameFormula::choice(
                GameFormula::test((**a).clone()),
                GameFormula::test((**b).clone()),
            ),
            B::Top,
        ),
        B::TupleNeq(a, b) => tuple_neq(a, b),
        B::Announce(t, a) => {
            let p = fresh.next_name();
            let pt = Term::param(&p);
            B::forall(
                &p,
                B::tensor(
                    B::neq(pt.clone(), t.clone()),
                    B::and(B::eq(pt, t.clone()), (**a).clone()),
                ),
            )
        }
        B::Dep(ts) => match ts.split_last() {
            Some((last, [])) => {
                let p = fresh.next_name();
                B::exists(&p, B::eq(last.clone(), Term::param(&p)))
            }
            Some((last, init)) => announce_all(init, B::Dep(vec![last.clone()])),
            None => B::Top,
        },
        B::Inc(a, b) => {
            let ps = fresh.tuple(a.len());
            let pt = params(&ps);
            forall_all(&ps, B::implies(tuple_neq(&pt, b), tuple_neq(&pt, a)))
        }
        B::Exc(a, b) => {
            let ps = fresh.tuple(a.len());
            let pt = params(&ps);
            forall_all(&ps, B::or(tuple_neq(&pt, a), tuple_neq(&pt, b)))
        }
        B::Indep(a, b, c) => {
            if b.is_empty() || c.is_empty() {
                return Some(B::Top);
            }
            let p2 = fresh.tuple(b.len());
            let p3 = fresh.tuple(c.len());
            let (t2, t3) = (params(&p2), params(&p3));
            let lhs: Vec<Term> = b.iter().chain(c).cloned().collect();
            let rhs: Vec<Term> = t2.iter().chain(&t3).cloned().collect();
            let body = B::implies(
                tuple_neq(&lhs, &rhs),
                B::or(tuple_neq(b, &t2), tuple_neq(c, &t3)),
            );
            let quantified = forall_all(&p2, forall_all(&p3, body));
            announce_all(a, quantified)
        }
        B::IntImplies(a, b) => B::SubSquare(Box::new(B::implies((**a).clone(), (**b).clone()))),
        _ => return None,
    };
    Some(out)
}

/// Rewrites every sugared connective, including those inside game tests.
pub fn desugar(phi: &BeliefFormula) -> BeliefFormula {
    let mut fresh = Fresh::for_formula(phi);
    desugar_with(phi, &mut fresh)
}

fn desugar_with(phi: &BeliefFormula, fresh: &mut Fresh) -> BeliefFormula {
    let mut root = phi.clone();
    while let Some(next) = expand_once(&root, fresh) {
        root = next;
    }
    let rec = |a: &BeliefFormula, fresh: &mut Fresh| Box::new(desugar_with(a, fresh));
    match root {
        B::Not(a) => B::Not(rec(&a, fresh)),
        B::Exists(p, a) => B::Exists(p, rec(&a, fresh)),
        B::Or(a, b) => {
            let a = rec(&a, fresh);
            B::Or(a, rec(&b, fresh))
        }
        B::Diamond(g, a) => {
            let g = desugar_game(&g, fresh);
            B::Diamond(Box::new(g), rec(&a, fresh))
        }
        B::SubDiamond(a) => B::SubDiamond(rec(&a, fresh)),
        B::SubSquare(a) => B::SubSquare(rec(&a, fresh)),
        atom => atom,
    }
}

fn desugar_game(g: &GameFormula, fresh: &mut Fresh) -> GameFormula {
    use GameFormula as G;
    match g {
        G::Skip | G::Choose(_) | G::Universal(_) => g.clone(),
        G::Seq(a, b) => {
            let a = desugar_game(a, fresh);
            G::seq(a, desugar_game(b, fresh))
        }
        G::Choice(a, b) => {
            let a = desugar_game(a, fresh);
            G::choice(a, desugar_game(b, fresh))
        }
        G::Par(a, b) => {
            let a = desugar_game(a, fresh);
            G::Par(Box::new(a), Box::new(desugar_game(b, fresh)))
        }
        G::Test(phi) => G::test(desugar_with(phi, fresh)),
        G::Hide(h, w) => G::Hide(Box::new(desugar_game(h, fresh)), w.clone()),
        G::Star(h) => G::star(desugar_game(h, fresh)),
    }
}

/// True when `phi` uses only core nodes and the subteam primitives.
pub fn is_desugared(phi: &BeliefFormula) -> bool {
    fn game(g: &GameFormula) -> bool {
        match g {
            GameFormula::Skip | GameFormula::Choose(_) | GameFormula::Universal(_) => true,
            GameFormula::Seq(a, b) | GameFormula::Choice(a, b) | GameFormula::Par(a, b) => {
                game(a) && game(b)
            }
            GameFormula::Test(phi) => is_desugared(phi),
            GameFormula::Hide(g, _) | GameFormula::Star(g) => game(g),
        }
    }
    match phi {
        B::Top | B::Rel(..) | B::NegRel(..) | B::Eq(..) | B::Neq(..) => true,
        B::Not(a) | B::Exists(_, a) | B::SubDiamond(a) | B::SubSquare(a) => is_desugared(a),
        B::Or(a, b) => is_desugared(a) && is_desugared(b),
        B::Diamond(g, a) => game(g) && is_desugared(a),
        _ => false,
    }
}
