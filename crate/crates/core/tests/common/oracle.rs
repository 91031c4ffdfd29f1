//! Brute-force strategy sets over a separate encoding. Assignments are
//! numbered with the last variable most significant, teams are 16-bit masks
//! over that numbering and a transition is an array of images indexed by
//! assignment, with 0 marking "outside the precondition". Atomic games are
//! decided by filtering every transition with the given precondition.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use translog::{BeliefFormula, GameFormula, Model, Team, Term, Transition};

pub type OTeam = u16;
pub type OTrans = [u16; 16];

pub struct Oracle<'m> {
    m: &'m Model,
    /// Value vector of each oracle assignment.
    vals: Vec<Vec<usize>>,
    cache: HashMap<(String, OTeam), Rc<BTreeSet<OTrans>>>,
}

fn members(x: OTeam) -> impl Iterator<Item = usize> {
    (0..16).filter(move |i| x >> i & 1 == 1)
}

fn prec(t: &OTrans) -> OTeam {
    t.iter()
        .enumerate()
        .filter(|(_, img)| **img != 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn post(t: &OTrans) -> OTeam {
    t.iter().fold(0, |acc, img| acc | img)
}

fn compose(a: &OTrans, b: &OTrans) -> OTrans {
    let mut out = [0; 16];
    for s in 0..16 {
        out[s] = members(a[s]).fold(0, |acc, t| acc | b[t]);
    }
    out
}

fn union(a: &OTrans, b: &OTrans) -> OTrans {
    let mut out = *a;
    for s in 0..16 {
        out[s] |= b[s];
    }
    out
}

fn identity(x: OTeam) -> OTrans {
    let mut out = [0; 16];
    for s in members(x) {
        out[s] = 1 << s;
    }
    out
}

impl<'m> Oracle<'m> {
    pub fn new(m: &'m Model) -> Self {
        let n = m.team_vars().len();
        let d = m.domain_size();
        let count = d.pow(n as u32);
        assert!(count <= 16, "oracle handles at most 16 assignments");
        let vals = (0..count)
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let v = k % d;
                        k /= d;
                        v
                    })
                    .collect()
            })
            .collect();
        Oracle {
            m,
            vals,
            cache: HashMap::new(),
        }
    }

    fn idx(&self, v: &str) -> usize {
        self.m.var_index(v).expect("declared variable")
    }

    fn code(&self, values: &[usize]) -> usize {
        self.vals.iter().position(|v| v == values).unwrap()
    }

    fn full(&self) -> OTeam {
        ((1u32 << self.vals.len()) - 1) as OTeam
    }

    pub fn team_from(&self, t: Team) -> OTeam {
        t.iter().fold(0, |acc, s| acc | 1 << self.code(&self.m.values(s)))
    }

    pub fn trans_from(&self, t: &Transition) -> OTrans {
        let mut out = [0; 16];
        for (s, img) in t.iter() {
            out[self.code(&self.m.values(s))] = self.team_from(img);
        }
        out
    }

    fn all_transitions(&self, x: OTeam) -> Vec<OTrans> {
        let mut out = vec![[0u16; 16]];
        for s in members(x) {
            let mut next = Vec::with_capacity(out.len() * self.full() as usize);
            for t in &out {
                for img in 1..=self.full() {
                    let mut t2 = *t;
                    t2[s] = img;
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }

    fn term(&self, t: &Term, s: usize) -> usize {
        match t {
            Term::Var(v) => self.vals[s][self.idx(v)],
            Term::Const(c) => self.m.constant(c).expect("constant"),
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, s)).collect();
                self.m.function(f).expect("function").apply(&vals, self.m.domain_size())
            }
            Term::Param(p) => panic!("oracle has no parameters: {}", p),
        }
    }

    /// Team satisfaction for the test formulas the oracle supports.
    pub fn holds(&self, phi: &BeliefFormula, x: OTeam) -> bool {
        use BeliefFormula as B;
        match phi {
            B::Top => true,
            B::Eq(a, b) => members(x).all(|s| self.term(a, s) == self.term(b, s)),
            B::Neq(a, b) => members(x).all(|s| self.term(a, s) != self.term(b, s)),
            B::Rel(r, ts) | B::NegRel(r, ts) => {
                let rel = &self.m.relation(r).expect("relation").tuples;
                let want = matches!(phi, B::Rel(..));
                members(x).all(|s| {
                    let row: Vec<usize> = ts.iter().map(|t| self.term(t, s)).collect();
                    rel.contains(&row) == want
                })
            }
            B::Not(a) => !self.holds(a, x),
            B::Or(a, b) => self.holds(a, x) || self.holds(b, x),
            other => panic!("oracle does not evaluate {}", other),
        }
    }

    /// `s` and `t` differ at most on variable `v`.
    fn same_but(&self, s: usize, t: usize, v: usize) -> bool {
        let (a, b) = (&self.vals[s], &self.vals[t]);
        (0..a.len()).all(|i| i == v || a[i] == b[i])
    }

    fn equiv(&self, s: usize, t: usize, hidden: &BTreeSet<usize>) -> bool {
        let (a, b) = (&self.vals[s], &self.vals[t]);
        (0..a.len()).all(|i| hidden.contains(&i) || a[i] == b[i])
    }

    fn values_of(&self, img: OTeam, v: usize) -> BTreeSet<usize> {
        members(img).map(|t| self.vals[t][v]).collect()
    }

    fn atom_member(&self, g: &GameFormula, x: OTeam, t: &OTrans) -> bool {
        match g {
            GameFormula::Skip => *t == identity(x),
            GameFormula::Test(phi) => *t == identity(x) && self.holds(phi, x),
            GameFormula::Choose(v) => {
                let v = self.idx(v);
                members(x).all(|s| members(t[s]).all(|u| self.same_but(s, u, v)))
            }
            GameFormula::Universal(v) => {
                let v = self.idx(v);
                members(x).all(|s| {
                    let full = (0..self.vals.len())
                        .filter(|&u| self.same_but(s, u, v))
                        .fold(0, |acc, u| acc | 1 << u);
                    t[s] == full
                })
            }
            GameFormula::Hide(inner, w) => {
                let GameFormula::Choose(v) = &**inner else {
                    unreachable!()
                };
                let hidden: BTreeSet<usize> = w.iter().map(|n| self.idx(n)).collect();
                let vi = self.idx(v);
                self.atom_member(inner, x, t)
                    && members(x).all(|s| {
                        members(x).all(|s2| {
                            !self.equiv(s, s2, &hidden)
                                || self.values_of(t[s], vi) == self.values_of(t[s2], vi)
                        })
                    })
            }
            _ => unreachable!(),
        }
    }

    fn parallel(&self, a: &OTrans, b: &OTrans, va: &[usize], vb: &[usize]) -> OTrans {
        let mut out = [0; 16];
        for s in members(prec(a)) {
            for s0 in members(a[s]) {
                for s1 in members(b[s]) {
                    let mut u = self.vals[s].clone();
                    for &v in va {
                        u[v] = self.vals[s0][v];
                    }
                    for &v in vb {
                        u[v] = self.vals[s1][v];
                    }
                    out[s] |= 1 << self.code(&u);
                }
            }
        }
        out
    }

    /// Every strategy of `g` with precondition `x`.
    pub fn strategies(&mut self, g: &GameFormula, x: OTeam) -> Rc<BTreeSet<OTrans>> {
        let key = (g.to_string(), x);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = Rc::new(self.compute(g, x));
        self.cache.insert(key, out.clone());
        out
    }

    fn compute(&mut self, g: &GameFormula, x: OTeam) -> BTreeSet<OTrans> {
        use GameFormula as G;
        match g {
            G::Skip | G::Choose(_) | G::Universal(_) | G::Test(_) => self
                .all_transitions(x)
                .into_iter()
                .filter(|t| self.atom_member(g, x, t))
                .collect(),
            G::Hide(inner, _) if matches!(**inner, G::Choose(_)) => self
                .all_transitions(x)
                .into_iter()
                .filter(|t| self.atom_member(g, x, t))
                .collect(),
            G::Hide(inner, w) => {
                let hidden: BTreeSet<usize> = w.iter().map(|n| self.idx(n)).collect();
                let inner = self.strategies(inner, x);
                inner
                    .iter()
                    .filter(|t| {
                        members(x).all(|s| {
                            members(x).all(|s2| !self.equiv(s, s2, &hidden) || t[s] == t[s2])
                        })
                    })
                    .cloned()
                    .collect()
            }
            G::Seq(a, b) => {
                let mut out = BTreeSet::new();
                for t1 in self.strategies(a, x).iter() {
                    for t2 in self.strategies(b, post(t1)).iter() {
                        out.insert(compose(t1, t2));
                    }
                }
                out
            }
            G::Choice(a, b) => {
                let mut out = BTreeSet::new();
                for x0 in 0..=x {
                    for x1 in 0..=x {
                        if x0 & !x != 0 || x1 & !x != 0 || x0 | x1 != x {
                            continue;
                        }
                        let left = self.strategies(a, x0);
                        let right = self.strategies(b, x1);
                        for t0 in left.iter() {
                            for t1 in right.iter() {
                                out.insert(union(t0, t1));
                            }
                        }
                    }
                }
                out
            }
            G::Star(a) => {
                let mut out: BTreeSet<OTrans> = [identity(x)].into();
                let mut frontier: Vec<OTrans> = out.iter().cloned().collect();
                while let Some(t) = frontier.pop() {
                    for t2 in self.strategies(a, post(&t)).iter() {
                        let c = compose(&t, t2);
                        if out.insert(c) {
                            frontier.push(c);
                        }
                    }
                }
                out
            }
            G::Par(a, b) => {
                let va: Vec<usize> = a.affected().iter().map(|v| self.idx(v)).collect();
                let vb: Vec<usize> = b.affected().iter().map(|v| self.idx(v)).collect();
                let left = self.strategies(a, x);
                let right = self.strategies(b, x);
                let mut out = BTreeSet::new();
                for t0 in left.iter() {
                    for t1 in right.iter() {
                        out.insert(self.parallel(t0, t1, &va, &vb));
                    }
                }
                out
            }
        }
    }
}

/// Every game of depth at most `depth` built from `atoms` with sequence,
/// choice, star, hiding over each set in `hides` and, where the affected
/// variables are disjoint, parallel composition.
pub fn games_up_to(atoms: &[GameFormula], hides: &[Vec<&str>], depth: usize) -> Vec<GameFormula> {
    let mut levels: Vec<Vec<GameFormula>> = vec![atoms.to_vec()];
    for d in 1..=depth {
        let below: Vec<GameFormula> = levels.iter().flatten().cloned().collect();
        let newest = &levels[d - 1];
        let mut next = Vec::new();
        for g in newest {
            next.push(GameFormula::star(g.clone()));
            for w in hides {
                next.push(GameFormula::hide(g.clone(), w));
            }
        }
        for a in &below {
            for b in &below {
                if a.depth() < d - 1 && b.depth() < d - 1 {
                    continue;
                }
                next.push(GameFormula::seq(a.clone(), b.clone()));
                next.push(GameFormula::choice(a.clone(), b.clone()));
                if let Ok(p) = GameFormula::par(a.clone(), b.clone()) {
                    next.push(p);
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

/// The alphabet for the exhaustive census: hiding enters through `/ {y}`.
pub fn census_alphabet() -> Vec<GameFormula> {
    let eq = BeliefFormula::eq(Term::var("x"), Term::var("y"));
    vec![
        GameFormula::Skip,
        GameFormula::choose("x"),
        GameFormula::universal("y"),
        GameFormula::test(BeliefFormula::not(eq)),
    ]
}

/// Compares the reference engine with the oracle on every game and every
/// team of `m`; returns the number of (game, team) checks.
pub fn census(m: &Model, games: &[GameFormula]) -> Result<usize, String> {
    let mut oracle = Oracle::new(m);
    let handle = translog::EngineHandle::reference();
    let env = translog::ParamEnv::new();
    let mut checks = 0;
    for g in games {
        for x in m.full_team().subteams() {
            let want = oracle.strategies(g, oracle.team_from(x));
            let got: BTreeSet<OTrans> = translog::strategies(m, g, x, &env, &handle)
                .map_err(|e| format!("{} at {}: {}", g, m.display_team(x), e))?
                .iter()
                .map(|t| oracle.trans_from(t))
                .collect();
            if *want != got {
                return Err(format!(
                    "{} at {}: oracle has {} strategies, engine {}",
                    g,
                    m.display_team(x),
                    want.len(),
                    got.len()
                ));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
