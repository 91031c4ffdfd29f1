//! Seeded random models, formulas and teams.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Model, Team};
use crate::syntax::{fragment_check, fragment_check_game, BeliefFormula, GameFormula};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    Full,
    TransitionLogic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaKind {
    Game,
    Belief,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusConfig {
    pub size: usize,
    /// Maximum constructor nesting depth; 0 gives atoms only.
    pub depth: usize,
    pub min_domain: usize,
    pub max_domain: usize,
    pub vars: usize,
    /// Teams per item: every team with at most this many assignments.
    pub max_team_size: usize,
    pub fragment: Fragment,
    pub kind: FormulaKind,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            size: 100,
            depth: 2,
            min_domain: 1,
            max_domain: 3,
            vars: 2,
            max_team_size: 4,
            fragment: Fragment::Full,
            kind: FormulaKind::Game,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Game(GameFormula),
    Belief(BeliefFormula),
}

impl Formula {
    pub fn in_transition_logic(&self) -> bool {
        match self {
            Formula::Game(g) => fragment_check_game(g).in_fragment,
            Formula::Belief(phi) => fragment_check(phi).in_fragment,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Game(g) => write!(f, "{}", g),
            Formula::Belief(phi) => write!(f, "{}", phi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub model: Model,
    pub formula: Formula,
    pub teams: Vec<Team>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub seed: u64,
    pub config: CorpusConfig,
    pub items: Vec<CorpusItem>,
}

/// Every team of `m` with at most `max_size` members, in canonical order.
pub fn teams_up_to(m: &Model, max_size: usize) -> Vec<Team> {
    let mut out: Vec<Team> = m
        .full_team()
        .subteams()
        .filter(|t| t.len() <= max_size)
        .collect();
    out.sort();
    out
}

/// A random model over variables `x`, `y`, ... with a unary relation `R`, a
/// binary relation `S`, a unary function `f` and a constant `c`.
pub fn random_model(rng: &mut impl Rng, min_domain: usize, max_domain: usize, vars: usize) -> Model {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    let n = rng.gen_range(min_domain.max(1)..=max_domain.max(min_domain.max(1)));
    let vars = vars.clamp(1, NAMES.len());
    let mut m = Model::new(n, &NAMES[..vars]).expect("valid random model");
    let r: Vec<Vec<usize>> = (0..n).filter(|_| rng.gen_bool(0.5)).map(|a| vec![a]).collect();
    m.add_relation("R", 1, r).expect("valid relation");
    let mut s = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(0.4) {
                s.push(vec![a, b]);
            }
        }
    }
    m.add_relation("S", 2, s).expect("valid relation");
    let rows: Vec<(Vec<usize>, usize)> = (0..n).map(|a| (vec![a], rng.gen_range(0..n))).collect();
    m.add_function("f", 1, rows).expect("total function");
    m.add_constant("c", rng.gen_range(0..n)).expect("valid constant");
    m
}

pub fn gen_corpus(seed: u64, config: &CorpusConfig) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(config.size);
    for _ in 0..config.size {
        let model = random_model(&mut rng, config.min_domain, config.max_domain, config.vars);
        let mut gen = Gen {
            rng: &mut rng,
            vars: model.team_vars().to_vec(),
            fragment: config.fragment,
            params: Vec::new(),
        };
        let formula = match config.kind {
            FormulaKind::Game => Formula::Game(gen.game(config.depth)),
            FormulaKind::Belief => Formula::Belief(gen.belief(config.depth)),
        };
        let teams = teams_up_to(&model, config.max_team_size);
        items.push(CorpusItem {
            model,
            formula,
            teams,
        });
    }
    Corpus {
        seed,
        config: config.clone(),
        items,
    }
}

/// Formula generator over the symbols of [`random_model`].
pub struct Gen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub vars: Vec<String>,
    pub fragment: Fragment,
    params: Vec<String>,
}

impl<'r, R: Rng> Gen<'r, R> {
    pub fn new(rng: &'r mut R, vars: Vec<String>, fragment: Fragment) -> Self {
        Gen {
            rng,
            vars,
            fragment,
            params: Vec::new(),
        }
    }

    fn var(&mut self) -> String {
        self.vars.choose(self.rng).unwrap().clone()
    }

    fn hidden(&mut self) -> Vec<String> {
        let mut w: Vec<String> = self
            .vars
            .clone()
            .into_iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .collect();
        if w.is_empty() {
            w.push(self.var());
        }
        w
    }

    pub fn term(&mut self) -> Term {
        let k = self.rng.gen_range(0..10);
        match k {
            0 => Term::constant("c"),
            1 => Term::app("f", vec![Term::var(&self.var())]),
            2 | 3 if !self.params.is_empty() => Term::param(&self.params.choose(self.rng).unwrap().clone()),
            _ => Term::var(&self.var()),
        }
    }

    fn terms(&mut self, n: usize) -> Vec<Term> {
        (0..n).map(|_| self.term()).collect()
    }

    pub fn game_atom(&mut self) -> GameFormula {
        match self.rng.gen_range(0..5) {
            0 => GameFormula::Skip,
            1 => GameFormula::Choose(self.var()),
            2 => GameFormula::Universal(self.var()),
            3 => GameFormula::test(self.belief_atom()),
            _ => {
                let w = self.hidden();
                GameFormula::hide(GameFormula::Choose(self.var()), &w)
            }
        }
    }

    pub fn game(&mut self, depth: usize) -> GameFormula {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.game_atom();
        }
        let full = self.fragment == Fragment::Full;
        let choices = if full { 7 } else { 4 };
        match self.rng.gen_range(0..choices) {
            0 => GameFormula::seq(self.game(depth - 1), self.game(depth - 1)),
            1 => GameFormula::choice(self.game(depth - 1), self.game(depth - 1)),
            2 => GameFormula::star(self.game(depth - 1)),
            3 => GameFormula::test(self.belief(depth - 1)),
            4 => {
                let w = self.hidden();
                GameFormula::hide(self.game(depth - 1), &w)
            }
            _ => {
                let left = self.game(depth - 1);
                let used = left.affected();
                let free: Vec<String> =
                    self.vars.iter().filter(|v| !used.contains(*v)).cloned().collect();
                let saved = std::mem::replace(&mut self.vars, free);
                let right = if self.vars.is_empty() {
                    GameFormula::test(BeliefFormula::Top)
                } else {
                    self.game(depth - 1)
                };
                self.vars = saved;
                GameFormula::par(left, right).expect("disjoint by construction")
            }
        }
    }

    pub fn belief_atom(&mut self) -> BeliefFormula {
        use BeliefFormula as B;
        match self.rng.gen_range(0..13) {
            0 => B::Top,
            1 => B::Bot,
            2 => B::rel("R", vec![self.term()]),
            3 => B::neg_rel("R", vec![self.term()]),
            4 => B::rel("S", self.terms(2)),
            5 => B::eq(self.term(), self.term()),
            6 => B::neq(self.term(), self.term()),
            7 => {
                let n = self.rng.gen_range(1..=3);
                B::Dep(self.terms(n))
            }
            8 => {
                let n = self.rng.gen_range(1..=2);
                B::Inc(self.terms(n), self.terms(n))
            }
            9 => {
                let n = self.rng.gen_range(1..=2);
                B::Exc(self.terms(n), self.terms(n))
            }
            10 => {
                let a = self.rng.gen_range(0..=1);
                B::Indep(self.terms(a), self.terms(1), self.terms(1))
            }
            11 => {
                let n = self.rng.gen_range(1..=2);
                B::TupleNeq(self.terms(n), self.terms(n))
            }
            _ => B::eq(Term::var(&self.var()), Term::var(&self.var())),
        }
    }

    pub fn belief(&mut self, depth: usize) -> BeliefFormula {
        use BeliefFormula as B;
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.belief_atom();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..16) {
            0 => B::not(self.belief(d)),
            1 => B::or(self.belief(d), self.belief(d)),
            2 => B::and(self.belief(d), self.belief(d)),
            3 => B::implies(self.belief(d), self.belief(d)),
            4 => B::Iff(Box::new(self.belief(d)), Box::new(self.belief(d))),
            5 | 6 => {
                let p = format!("p{}", self.params.len());
                self.params.push(p.clone());
                let body = self.belief(d);
                self.params.pop();
                if self.rng.gen_bool(0.5) {
                    B::exists(&p, body)
                } else {
                    B::forall(&p, body)
                }
            }
            7 => B::diamond(self.game(d.min(1)), self.belief(d)),
            8 => B::square(self.game(d.min(1)), self.belief(d)),
            9 => B::tensor(self.belief(d), self.belief(d)),
            10 => B::Announce(self.term(), Box::new(self.belief(d))),
            11 => B::SubDiamond(Box::new(self.belief(d))),
            12 => B::SubSquare(Box::new(self.belief(d))),
            13 => B::IntImplies(Box::new(self.belief(d)), Box::new(self.belief(d))),
            _ => self.belief_atom(),
        }
    }
}
