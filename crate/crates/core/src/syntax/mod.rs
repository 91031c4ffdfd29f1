//! Game and belief formulas.
//!
//! The two sorts are mutually recursive: games embed belief formulas through
//! tests `?(phi)`, belief formulas embed games through the modalities `<g>`
//! and `[g]`. Sugared belief connectives stay in the tree so they can be
//! evaluated natively; [`desugar`] rewrites them into the core language.

mod desugar;
mod fragment;
mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

pub use desugar::{desugar, expand_once, is_desugared, Fresh};
pub use fragment::{fragment_check, fragment_check_game, FragmentReport, Violation, ViolationKind};
pub use parser::{parse_belief, parse_game, ParseError, Parser};

use crate::model::{Model, VarSet};
use crate::term::Term;

/// A game formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GameFormula {
    /// `eps`: the empty game.
    Skip,
    /// `#v`: Eloise picks new values for `v`.
    Choose(String),
    /// `!v`: Abelard picks a value for `v`.
    Universal(String),
    Seq(Box<GameFormula>, Box<GameFormula>),
    /// `g + h`: Eloise chooses which game to play.
    Choice(Box<GameFormula>, Box<GameFormula>),
    Test(Box<BeliefFormula>),
    /// `g / {W}`: strategies independent on `W`.
    Hide(Box<GameFormula>, BTreeSet<String>),
    Star(Box<GameFormula>),
    Par(Box<GameFormula>, Box<GameFormula>),
}

/// A belief formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BeliefFormula {
    Top,
    Rel(String, Vec<Term>),
    /// Dual (atomic) negation `-R(t..)`.
    NegRel(String, Vec<Term>),
    Eq(Term, Term),
    Neq(Term, Term),
    /// Contradictory negation `~phi`.
    Not(Box<BeliefFormula>),
    Exists(String, Box<BeliefFormula>),
    Or(Box<BeliefFormula>, Box<BeliefFormula>),
    Diamond(Box<GameFormula>, Box<BeliefFormula>),

    Bot,
    And(Box<BeliefFormula>, Box<BeliefFormula>),
    Implies(Box<BeliefFormula>, Box<BeliefFormula>),
    Iff(Box<BeliefFormula>, Box<BeliefFormula>),
    Forall(String, Box<BeliefFormula>),
    Square(Box<GameFormula>, Box<BeliefFormula>),
    Tensor(Box<BeliefFormula>, Box<BeliefFormula>),
    TupleNeq(Vec<Term>, Vec<Term>),
    Announce(Term, Box<BeliefFormula>),
    Dep(Vec<Term>),
    Inc(Vec<Term>, Vec<Term>),
    Exc(Vec<Term>, Vec<Term>),
    Indep(Vec<Term>, Vec<Term>, Vec<Term>),
    SubDiamond(Box<BeliefFormula>),
    SubSquare(Box<BeliefFormula>),
    IntImplies(Box<BeliefFormula>, Box<BeliefFormula>),
}

impl GameFormula {
    pub fn choose(v: &str) -> Self {
        GameFormula::Choose(v.to_string())
    }

    pub fn universal(v: &str) -> Self {
        GameFormula::Universal(v.to_string())
    }

    pub fn seq(a: GameFormula, b: GameFormula) -> Self {
        GameFormula::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: GameFormula, b: GameFormula) -> Self {
        GameFormula::Choice(Box::new(a), Box::new(b))
    }

    pub fn test(phi: BeliefFormula) -> Self {
        GameFormula::Test(Box::new(phi))
    }

    pub fn hide<S: AsRef<str>>(g: GameFormula, vars: &[S]) -> Self {
        GameFormula::Hide(
            Box::new(g),
            vars.iter().map(|v| v.as_ref().to_string()).collect(),
        )
    }

    pub fn star(g: GameFormula) -> Self {
        GameFormula::Star(Box::new(g))
    }

    /// Parallel composition; the branches must not share affected variables.
    pub fn par(a: GameFormula, b: GameFormula) -> Result<Self, String> {
        let shared: Vec<_> = a.affected().intersection(&b.affected()).cloned().collect();
        if let Some(v) = shared.first() {
            return Err(format!("parallel branches share affected variable {}", v));
        }
        Ok(GameFormula::Par(Box::new(a), Box::new(b)))
    }

    /// `aff(γ)`: the variables the game may rewrite.
    pub fn affected(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_affected(&mut out);
        out
    }

    fn collect_affected(&self, out: &mut BTreeSet<String>) {
        match self {
            GameFormula::Skip | GameFormula::Test(_) => {}
            GameFormula::Choose(v) | GameFormula::Universal(v) => {
                out.insert(v.clone());
            }
            GameFormula::Seq(a, b) | GameFormula::Choice(a, b) | GameFormula::Par(a, b) => {
                a.collect_affected(out);
                b.collect_affected(out);
            }
            GameFormula::Hide(g, _) | GameFormula::Star(g) => g.collect_affected(out),
        }
    }

    /// `aff(γ)` as variable positions of `model`; undeclared names are skipped.
    pub fn affected_in(&self, model: &Model) -> VarSet {
        self.affected()
            .iter()
            .filter_map(|v| model.var_index(v))
            .collect()
    }

    /// Nesting depth of game constructors; atomic games have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            GameFormula::Skip
            | GameFormula::Choose(_)
            | GameFormula::Universal(_)
            | GameFormula::Test(_) => 0,
            GameFormula::Seq(a, b) | GameFormula::Choice(a, b) | GameFormula::Par(a, b) => {
                1 + a.depth().max(b.depth())
            }
            GameFormula::Hide(g, _) | GameFormula::Star(g) => 1 + g.depth(),
        }
    }

    /// Checks declared variables, relation/function arities and parallel disjointness.
    pub fn check(&self, model: &Model) -> Result<(), String> {
        let mut scope = Vec::new();
        check_game(self, model, &mut scope)
    }
}

impl BeliefFormula {
    pub fn not(phi: BeliefFormula) -> Self {
        BeliefFormula::Not(Box::new(phi))
    }

    pub fn or(a: BeliefFormula, b: BeliefFormula) -> Self {
        BeliefFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: BeliefFormula, b: BeliefFormula) -> Self {
        BeliefFormula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: BeliefFormula, b: BeliefFormula) -> Self {
        BeliefFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(p: &str, phi: BeliefFormula) -> Self {
        BeliefFormula::Exists(p.to_string(), Box::new(phi))
    }

    pub fn forall(p: &str, phi: BeliefFormula) -> Self {
        BeliefFormula::Forall(p.to_string(), Box::new(phi))
    }

    pub fn diamond(g: GameFormula, phi: BeliefFormula) -> Self {
        BeliefFormula::Diamond(Box::new(g), Box::new(phi))
    }

    pub fn square(g: GameFormula, phi: BeliefFormula) -> Self {
        BeliefFormula::Square(Box::new(g), Box::new(phi))
    }

    pub fn tensor(a: BeliefFormula, b: BeliefFormula) -> Self {
        BeliefFormula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn rel(r: &str, args: Vec<Term>) -> Self {
        BeliefFormula::Rel(r.to_string(), args)
    }

    pub fn neg_rel(r: &str, args: Vec<Term>) -> Self {
        BeliefFormula::NegRel(r.to_string(), args)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        BeliefFormula::Eq(a, b)
    }

    pub fn neq(a: Term, b: Term) -> Self {
        BeliefFormula::Neq(a, b)
    }

    /// True for the nine core constructors.
    pub fn is_core_node(&self) -> bool {
        matches!(
            self,
            BeliefFormula::Top
                | BeliefFormula::Rel(..)
                | BeliefFormula::NegRel(..)
                | BeliefFormula::Eq(..)
                | BeliefFormula::Neq(..)
                | BeliefFormula::Not(_)
                | BeliefFormula::Exists(..)
                | BeliefFormula::Or(..)
                | BeliefFormula::Diamond(..)
        )
    }

    pub fn check(&self, model: &Model) -> Result<(), String> {
        let mut scope = Vec::new();
        check_belief(self, model, &mut scope)
    }

    /// Free parameter variables, in order of first occurrence.
    pub fn free_params(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        free_belief(self, &mut bound, &mut out);
        out
    }
}

fn push_free(t: &Term, bound: &[String], out: &mut Vec<String>) {
    let mut ps = Vec::new();
    t.params(&mut ps);
    for p in ps {
        if !bound.iter().any(|b| b == p) && !out.iter().any(|o| o == p) {
            out.push(p.to_string());
        }
    }
}

fn free_game(g: &GameFormula, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match g {
        GameFormula::Skip | GameFormula::Choose(_) | GameFormula::Universal(_) => {}
        GameFormula::Seq(a, b) | GameFormula::Choice(a, b) | GameFormula::Par(a, b) => {
            free_game(a, bound, out);
            free_game(b, bound, out);
        }
        GameFormula::Test(phi) => free_belief(phi, bound, out),
        GameFormula::Hide(g, _) | GameFormula::Star(g) => free_game(g, bound, out),
    }
}

fn free_belief(phi: &BeliefFormula, bound: &mut Vec<String>, out: &mut Vec<String>) {
    use BeliefFormula as B;
    let terms = |ts: &[&Term], bound: &[String], out: &mut Vec<String>| {
        ts.iter().for_each(|t| push_free(t, bound, out))
    };
    match phi {
        B::Top | B::Bot => {}
        B::Rel(_, ts) | B::NegRel(_, ts) | B::Dep(ts) => {
            terms(&ts.iter().collect::<Vec<_>>(), bound, out)
        }
        B::Eq(a, b) | B::Neq(a, b) => terms(&[a, b], bound, out),
        B::TupleNeq(a, b) | B::Inc(a, b) | B::Exc(a, b) => {
            terms(&a.iter().chain(b).collect::<Vec<_>>(), bound, out)
        }
        B::Indep(a, b, c) => terms(&a.iter().chain(b).chain(c).collect::<Vec<_>>(), bound, out),
        B::Not(a) | B::SubDiamond(a) | B::SubSquare(a) => free_belief(a, bound, out),
        B::Exists(p, a) | B::Forall(p, a) => {
            bound.push(p.clone());
            free_belief(a, bound, out);
            bound.pop();
        }
        B::Or(a, b)
        | B::And(a, b)
        | B::Implies(a, b)
        | B::Iff(a, b)
        | B::Tensor(a, b)
        | B::IntImplies(a, b) => {
            free_belief(a, bound, out);
            free_belief(b, bound, out);
        }
        B::Diamond(g, a) | B::Square(g, a) => {
            free_game(g, bound, out);
            free_belief(a, bound, out);
        }
        B::Announce(t, a) => {
            push_free(t, bound, out);
            free_belief(a, bound, out);
        }
    }
}

fn check_term(t: &Term, model: &Model, scope: &[String]) -> Result<(), String> {
    match t {
        Term::Var(v) if model.var_index(v).is_none() => Err(format!("undeclared variable `{}`", v)),
        Term::Param(p) if !scope.iter().any(|s| s == p) => {
            Err(format!("unbound parameter variable `{}`", p))
        }
        Term::Const(c) if model.constant(c).is_none() => Err(format!("unknown constant `{}`", c)),
        Term::App(f, args) => {
            let func = model
                .function(f)
                .ok_or_else(|| format!("unknown function `{}`", f))?;
            if func.arity != args.len() {
                return Err(format!(
                    "function `{}` expects {} arguments, got {}",
                    f,
                    func.arity,
                    args.len()
                ));
            }
            args.iter().try_for_each(|a| check_term(a, model, scope))
        }
        _ => Ok(()),
    }
}

fn check_terms(ts: &[Term], model: &Model, scope: &[String]) -> Result<(), String> {
    ts.iter().try_for_each(|t| check_term(t, model, scope))
}

fn check_var(v: &str, model: &Model) -> Result<(), String> {
    model
        .var_index(v)
        .map(|_| ())
        .ok_or_else(|| format!("undeclared variable `{}`", v))
}

fn check_game(g: &GameFormula, model: &Model, scope: &mut Vec<String>) -> Result<(), String> {
    match g {
        GameFormula::Skip => Ok(()),
        GameFormula::Choose(v) | GameFormula::Universal(v) => check_var(v, model),
        GameFormula::Seq(a, b) | GameFormula::Choice(a, b) => {
            check_game(a, model, scope)?;
            check_game(b, model, scope)
        }
        GameFormula::Par(a, b) => {
            check_game(a, model, scope)?;
            check_game(b, model, scope)?;
            if let Some(v) = a.affected().intersection(&b.affected()).next() {
                return Err(format!("parallel branches share affected variable {}", v));
            }
            Ok(())
        }
        GameFormula::Test(phi) => check_belief(phi, model, scope),
        GameFormula::Hide(g, w) => {
            w.iter().try_for_each(|v| check_var(v, model))?;
            check_game(g, model, scope)
        }
        GameFormula::Star(g) => check_game(g, model, scope),
    }
}

fn check_relation(r: &str, ts: &[Term], model: &Model) -> Result<(), String> {
    let rel = model
        .relation(r)
        .ok_or_else(|| format!("unknown relation `{}`", r))?;
    if rel.arity != ts.len() {
        return Err(format!(
            "relation `{}` expects {} arguments, got {}",
            r,
            rel.arity,
            ts.len()
        ));
    }
    Ok(())
}

fn check_belief(phi: &BeliefFormula, model: &Model, scope: &mut Vec<String>) -> Result<(), String> {
    use BeliefFormula as B;
    match phi {
        B::Top | B::Bot => Ok(()),
        B::Rel(r, ts) | B::NegRel(r, ts) => {
            check_relation(r, ts, model)?;
            check_terms(ts, model, scope)
        }
        B::Eq(a, b) | B::Neq(a, b) => {
            check_term(a, model, scope)?;
            check_term(b, model, scope)
        }
        B::Not(a) | B::SubDiamond(a) | B::SubSquare(a) => check_belief(a, model, scope),
        B::Exists(p, a) | B::Forall(p, a) => {
            scope.push(p.clone());
            let r = check_belief(a, model, scope);
            scope.pop();
            r
        }
        B::Or(a, b)
        | B::And(a, b)
        | B::Implies(a, b)
        | B::Iff(a, b)
        | B::Tensor(a, b)
        | B::IntImplies(a, b) => {
            check_belief(a, model, scope)?;
            check_belief(b, model, scope)
        }
        B::Diamond(g, a) | B::Square(g, a) => {
            check_game(g, model, scope)?;
            check_belief(a, model, scope)
        }
        B::TupleNeq(a, b) | B::Inc(a, b) | B::Exc(a, b) => {
            if a.len() != b.len() || a.is_empty() {
                return Err(format!(
                    "tuple atom needs two nonempty tuples of equal length, got {} and {}",
                    a.len(),
                    b.len()
                ));
            }
            check_terms(a, model, scope)?;
            check_terms(b, model, scope)
        }
        B::Announce(t, a) => {
            check_term(t, model, scope)?;
            check_belief(a, model, scope)
        }
        B::Dep(ts) => {
            if ts.is_empty() {
                return Err("dependence atom needs at least one term".into());
            }
            check_terms(ts, model, scope)
        }
        B::Indep(a, b, c) => {
            check_terms(a, model, scope)?;
            check_terms(b, model, scope)?;
            check_terms(c, model, scope)
        }
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, ts: &[Term]) -> fmt::Result {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", t)?;
    }
    Ok(())
}

impl fmt::Display for GameFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameFormula::Skip => f.write_str("eps"),
            GameFormula::Choose(v) => write!(f, "#{}", v),
            GameFormula::Universal(v) => write!(f, "!{}", v),
            GameFormula::Seq(a, b) => write!(f, "({} ; {})", a, b),
            GameFormula::Choice(a, b) => write!(f, "({} + {})", a, b),
            GameFormula::Par(a, b) => write!(f, "({} || {})", a, b),
            GameFormula::Test(phi) => write!(f, "?({})", phi),
            GameFormula::Hide(g, w) => {
                let vars: Vec<_> = w.iter().map(String::as_str).collect();
                write!(f, "{} / {{{}}}", g, vars.join(","))
            }
            GameFormula::Star(g) => write!(f, "{}*", g),
        }
    }
}

impl fmt::Display for BeliefFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BeliefFormula as B;
        match self {
            B::Top => f.write_str("top"),
            B::Bot => f.write_str("bot"),
            B::Rel(r, ts) => {
                write!(f, "{}(", r)?;
                write_terms(f, ts)?;
                f.write_str(")")
            }
            B::NegRel(r, ts) => {
                write!(f, "-{}(", r)?;
                write_terms(f, ts)?;
                f.write_str(")")
            }
            B::Eq(a, b) => write!(f, "{} = {}", a, b),
            B::Neq(a, b) => write!(f, "{} != {}", a, b),
            B::Not(a) => write!(f, "~{}", Wrapped(a)),
            B::Exists(p, a) => write!(f, "(E {}. {})", p, a),
            B::Forall(p, a) => write!(f, "(A {}. {})", p, a),
            B::Or(a, b) => write!(f, "({} \\/ {})", a, b),
            B::And(a, b) => write!(f, "({} /\\ {})", a, b),
            B::Implies(a, b) => write!(f, "({} -> {})", a, b),
            B::Iff(a, b) => write!(f, "({} <-> {})", a, b),
            B::Tensor(a, b) => write!(f, "({} (+) {})", a, b),
            B::IntImplies(a, b) => write!(f, "({} ~> {})", a, b),
            B::Diamond(g, a) => write!(f, "<{}> {}", g, Wrapped(a)),
            B::Square(g, a) => write!(f, "[{}] {}", g, Wrapped(a)),
            B::SubDiamond(a) => write!(f, "<sub> {}", Wrapped(a)),
            B::SubSquare(a) => write!(f, "[sub] {}", Wrapped(a)),
            B::TupleNeq(a, b) => {
                f.write_str("(")?;
                write_terms(f, a)?;
                f.write_str(") != (")?;
                write_terms(f, b)?;
                f.write_str(")")
            }
            B::Announce(t, a) => write!(f, "(delta {}. {})", t, a),
            B::Dep(ts) => {
                f.write_str("dep(")?;
                write_terms(f, ts)?;
                f.write_str(")")
            }
            B::Inc(a, b) | B::Exc(a, b) => {
                f.write_str(if matches!(self, B::Inc(..)) { "inc(" } else { "exc(" })?;
                write_terms(f, a)?;
                f.write_str("; ")?;
                write_terms(f, b)?;
                f.write_str(")")
            }
            B::Indep(a, b, c) => {
                f.write_str("indep(")?;
                write_terms(f, a)?;
                f.write_str("; ")?;
                write_terms(f, b)?;
                f.write_str("; ")?;
                write_terms(f, c)?;
                f.write_str(")")
            }
        }
    }
}

/// Operand of a prefix operator: parenthesized unless it already binds tightly.
struct Wrapped<'a>(&'a BeliefFormula);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BeliefFormula as B;
        match self.0 {
            B::Eq(..) | B::Neq(..) => write!(f, "({})", self.0),
            _ => write!(f, "{}", self.0),
        }
    }
}
