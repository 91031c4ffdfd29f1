//! Differential runs over a corpus.

use std::fmt;

use super::corpus::{Corpus, CorpusItem, Formula};
use super::io::model_digest;
use crate::engine::{satisfies, strategies, successors, Budget, EngineHandle, EngineKind};
use crate::error::EvalError;
use crate::model::{Model, ParamEnv, Team};
use crate::syntax::desugar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffMode {
    /// Reference strategy postconditions against transition-engine successors.
    Semantics,
    /// Native evaluation of sugared formulas against their desugared form.
    Sugar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Agree,
    Disagree,
    Budget,
    /// The formula uses constructs the transition engine does not cover.
    OutsideFragment,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Agree => "agree",
            Status::Disagree => "disagree",
            Status::Budget => "budget",
            Status::OutsideFragment => "outside Transition Logic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub team: String,
    pub reference: String,
    pub other: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub formula: String,
    pub digest: String,
    pub mismatches: Vec<Mismatch>,
    pub status: Status,
    pub note: Option<String>,
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} :: {}", self.digest, self.status, self.formula)?;
        if let Some(note) = &self.note {
            write!(f, " ({})", note)?;
        }
        for m in &self.mismatches {
            write!(
                f,
                "\n  team {}: reference {} / other {}",
                m.team, m.reference, m.other
            )?;
        }
        Ok(())
    }
}

fn render_teams(m: &Model, teams: &[Team]) -> String {
    let parts: Vec<String> = teams.iter().map(|t| m.display_team(*t)).collect();
    format!("[{}]", parts.join(", "))
}

enum Verdicts {
    Same,
    Differ(String, String),
}

fn compare_item(item: &CorpusItem, mode: DiffMode, budget: Budget, team: Team) -> Result<Verdicts, EvalError> {
    let m = &item.model;
    let env = ParamEnv::new();
    let reference = EngineHandle::new(EngineKind::Reference, budget);
    match (mode, &item.formula) {
        (DiffMode::Semantics, Formula::Game(g)) => {
            let posts = strategies(m, g, team, &env, &reference)?.posts();
            let transition = EngineHandle::new(EngineKind::Transition, budget);
            let succ = successors(m, g, team, &env, &transition)?;
            Ok(if posts == succ {
                Verdicts::Same
            } else {
                Verdicts::Differ(render_teams(m, &posts), render_teams(m, &succ))
            })
        }
        (DiffMode::Semantics, Formula::Belief(phi)) => {
            let a = satisfies(m, team, phi, &env, &reference)?;
            let transition = EngineHandle::new(EngineKind::Transition, budget);
            let b = satisfies(m, team, phi, &env, &transition)?;
            Ok(if a == b {
                Verdicts::Same
            } else {
                Verdicts::Differ(a.to_string(), b.to_string())
            })
        }
        (DiffMode::Sugar, Formula::Belief(phi)) => {
            let a = satisfies(m, team, phi, &env, &reference)?;
            let b = satisfies(m, team, &desugar(phi), &env, &reference)?;
            Ok(if a == b {
                Verdicts::Same
            } else {
                Verdicts::Differ(a.to_string(), b.to_string())
            })
        }
        (DiffMode::Sugar, Formula::Game(_)) => Ok(Verdicts::Same),
    }
}

/// Runs one corpus item over all of its teams.
pub fn diff_item(item: &CorpusItem, mode: DiffMode, budget: Budget) -> DiffReport {
    let mut report = DiffReport {
        formula: item.formula.to_string(),
        digest: model_digest(&item.model),
        mismatches: Vec::new(),
        status: Status::Agree,
        note: None,
    };
    if mode == DiffMode::Semantics && !item.formula.in_transition_logic() {
        report.status = Status::OutsideFragment;
        return report;
    }
    for &team in &item.teams {
        match compare_item(item, mode, budget, team) {
            Ok(Verdicts::Same) => {}
            Ok(Verdicts::Differ(reference, other)) => report.mismatches.push(Mismatch {
                team: item.model.display_team(team),
                reference,
                other,
            }),
            Err(e) => {
                report.status = if e.is_budget() {
                    Status::Budget
                } else if matches!(e, EvalError::OutsideTransitionLogic(_)) {
                    Status::OutsideFragment
                } else {
                    Status::Disagree
                };
                report.note = Some(format!("{} at team {}", e, item.model.display_team(team)));
                return report;
            }
        }
    }
    if !report.mismatches.is_empty() {
        report.status = Status::Disagree;
    }
    report
}

/// One report per corpus item, in corpus order.
pub fn run_diff(corpus: &Corpus, mode: DiffMode, budget: Budget) -> Vec<DiffReport> {
    corpus
        .items
        .iter()
        .map(|item| diff_item(item, mode, budget))
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub agree: usize,
    pub disagree: usize,
    pub budget: usize,
    pub outside: usize,
}

pub fn summarize(reports: &[DiffReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.status {
            Status::Agree => s.agree += 1,
            Status::Disagree => s.disagree += 1,
            Status::Budget => s.budget += 1,
            Status::OutsideFragment => s.outside += 1,
        }
    }
    s
}
