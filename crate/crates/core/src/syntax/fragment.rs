//! Membership check for the Transition Logic fragment: no parallel
//! composition, and hiding only directly on a quantifier game `#v`.

use std::fmt;

use super::{BeliefFormula, GameFormula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    ParallelComposition,
    NonQuantifierHiding,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::ParallelComposition => "parallel-composition",
            ViolationKind::NonQuantifierHiding => "non-quantifier-hiding",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// The offending game node, rendered.
    pub node: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FragmentReport {
    pub in_fragment: bool,
    pub violations: Vec<Violation>,
}

impl FragmentReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        FragmentReport {
            in_fragment: violations.is_empty(),
            violations,
        }
    }
}

impl fmt::Display for FragmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.in_fragment {
            return writeln!(f, "in fragment");
        }
        writeln!(f, "outside fragment")?;
        for v in &self.violations {
            writeln!(f, "{}: {}", v.kind, v.node)?;
        }
        Ok(())
    }
}

pub fn fragment_check(phi: &BeliefFormula) -> FragmentReport {
    let mut out = Vec::new();
    belief(phi, &mut out);
    FragmentReport::from_violations(out)
}

pub fn fragment_check_game(g: &GameFormula) -> FragmentReport {
    let mut out = Vec::new();
    game(g, &mut out);
    FragmentReport::from_violations(out)
}

fn game(g: &GameFormula, out: &mut Vec<Violation>) {
    match g {
        GameFormula::Skip | GameFormula::Choose(_) | GameFormula::Universal(_) => {}
        GameFormula::Seq(a, b) | GameFormula::Choice(a, b) => {
            game(a, out);
            game(b, out);
        }
        GameFormula::Par(a, b) => {
            out.push(Violation {
                node: g.to_string(),
                kind: ViolationKind::ParallelComposition,
            });
            game(a, out);
            game(b, out);
        }
        GameFormula::Test(phi) => belief(phi, out),
        GameFormula::Hide(h, _) => {
            if !matches!(**h, GameFormula::Choose(_)) {
                out.push(Violation {
                    node: g.to_string(),
                    kind: ViolationKind::NonQuantifierHiding,
                });
            }
            game(h, out);
        }
        GameFormula::Star(h) => game(h, out),
    }
}

fn belief(phi: &BeliefFormula, out: &mut Vec<Violation>) {
    use BeliefFormula as B;
    match phi {
        B::Top
        | B::Bot
        | B::Rel(..)
        | B::NegRel(..)
        | B::Eq(..)
        | B::Neq(..)
        | B::TupleNeq(..)
        | B::Dep(_)
        | B::Inc(..)
        | B::Exc(..)
        | B::Indep(..) => {}
        B::Not(a)
        | B::Exists(_, a)
        | B::Forall(_, a)
        | B::Announce(_, a)
        | B::SubDiamond(a)
        | B::SubSquare(a) => belief(a, out),
        B::Or(a, b)
        | B::And(a, b)
        | B::Implies(a, b)
        | B::Iff(a, b)
        | B::Tensor(a, b)
        | B::IntImplies(a, b) => {
            belief(a, out);
            belief(b, out);
        }
        B::Diamond(g, a) | B::Square(g, a) => {
            game(g, out);
            belief(a, out);
        }
    }
}
