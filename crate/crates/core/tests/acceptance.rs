//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use translog::harness::corpus::random_model;
use translog::harness::{gen_corpus, run_diff, summarize, CorpusConfig, DiffMode, FormulaKind, Fragment};
use translog::{is_true, parse_belief, Budget, EngineHandle, Model, TRUTH_ASSIGNMENT_CAP};

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant, ok: String) -> Outcome {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{} in {:.1?}", ok, took))
    } else {
        Err(format!("{} but took {:.1?} (limit {:?})", ok, took, limit))
    }
}

fn semantics_equivalence() -> Outcome {
    let start = Instant::now();
    let config = CorpusConfig {
        size: 250,
        depth: 3,
        min_domain: 1,
        max_domain: 2,
        vars: 2,
        max_team_size: 4,
        fragment: Fragment::TransitionLogic,
        kind: FormulaKind::Game,
    };
    let corpus = gen_corpus(20240611, &config);
    let reports = run_diff(&corpus, DiffMode::Semantics, Budget::default());
    let s = summarize(&reports);
    if s.agree != reports.len() {
        let first = reports.iter().find(|r| r.status != translog::harness::Status::Agree);
        return Err(format!(
            "agree {} disagree {} budget {} outside {}; first: {}",
            s.agree,
            s.disagree,
            s.budget,
            s.outside,
            first.map(|r| r.to_string()).unwrap_or_default()
        ));
    }
    within(
        Duration::from_secs(300),
        start,
        format!("{} formulas, 0 mismatches", reports.len()),
    )
}

fn sugar_oracle() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    let fixtures = common::domain2_fixtures();
    for m in &fixtures {
        checks += common::sugar::check_model(m)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let m = random_model(&mut rng, 1, 3, 2);
        checks += common::sugar::check_model(&m)?;
    }
    let constructs = common::sugar::INSTANCES.len();
    Ok(format!(
        "{} constructs, {} fixture + 50 random models, {} team checks, {:.1?}",
        constructs,
        fixtures.len(),
        checks,
        start.elapsed()
    ))
}

fn pinned_fixtures() -> Outcome {
    common::fixtures::parallel()?;
    common::fixtures::hiding()?;
    Ok("parallel and hiding counterexamples reproduced".into())
}

fn sentence_check() -> Outcome {
    let start = Instant::now();
    let mut verdicts = Vec::new();
    for n in 1..=3 {
        let m = Model::new(n, &["x", "y"]).unwrap();
        let phi = parse_belief("<#x ; !y> x = y", &m).map_err(|e| e.to_string())?;
        let truth = is_true(&m, &phi, &EngineHandle::transition(), TRUTH_ASSIGNMENT_CAP)
            .map_err(|e| e.to_string())?;
        if truth != (n == 1) {
            return Err(format!("domain {}: {}", n, truth));
        }
        verdicts.push(format!("{}:{}", n, if truth { "TRUE" } else { "FALSE" }));
    }
    within(Duration::from_secs(10), start, verdicts.join(" "))
}

fn invariants() -> Outcome {
    let start = Instant::now();
    for (name, suite) in common::props::SUITES {
        suite(1000).map_err(|e| format!("{}: {}", name, e))?;
    }
    Ok(format!(
        "{} suites x 1000 cases, {:.1?}",
        common::props::SUITES.len(),
        start.elapsed()
    ))
}

fn brute_force_oracle() -> Outcome {
    use common::oracle::{census, census_alphabet, games_up_to};
    let start = Instant::now();
    let m = common::m2();
    let games = games_up_to(&census_alphabet(), &[vec!["y"]], 2);
    let checks = census(&m, &games)?;
    within(
        Duration::from_secs(120),
        start,
        format!("{} games of depth <= 2, {} (game, team) pairs", games.len(), checks),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("semantics equivalence", semantics_equivalence),
        ("sugar oracle", sugar_oracle),
        ("pinned fixtures", pinned_fixtures),
        ("sentence check", sentence_check),
        ("invariant suites", invariants),
        ("brute-force oracle", brute_force_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {}: {}", i + 1, name, detail),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {}: {}", i + 1, name, detail);
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
