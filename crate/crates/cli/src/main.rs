use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use translog::harness::{
    gen_corpus, load_model, parse_team, run_diff, summarize, CorpusConfig, DiffMode, FormulaKind,
    Fragment, Status,
};
use translog::syntax::{fragment_check, fragment_check_game, Parser as FormulaParser};
use translog::{
    first_failing_team, parse_belief, parse_game, satisfies, strategies, successors, Budget,
    EngineHandle, EngineKind, EvalError, Model, ParamEnv, Team, TRUTH_ASSIGNMENT_CAP,
};

#[derive(Parser)]
#[command(name = "translog", version, about = "Model checker for team-semantic game logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    /// Transition engine when the formula is in Transition Logic, reference otherwise.
    Auto,
    Reference,
    Transition,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Semantics,
    Sugar,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a team satisfies a formula.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        team: String,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
    },
    /// Decide whether every team of the model satisfies a formula.
    Truth {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
        /// Refuse models with more assignments than this.
        #[arg(long, default_value_t = TRUTH_ASSIGNMENT_CAP)]
        cap: usize,
    },
    /// List the strategies of a game from a team.
    Strategies {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        team: String,
        #[arg(long)]
        game: String,
    },
    /// List the successor teams of a Transition Logic game.
    Successors {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        team: String,
        #[arg(long)]
        game: String,
    },
    /// Compare two formulas on every team of the model.
    Equiv {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long, default_value_t = TRUTH_ASSIGNMENT_CAP)]
        cap: usize,
    },
    /// Differential run over a seeded random corpus.
    Diff {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = 4)]
        max_team: usize,
        /// Also generate parallel composition and general hiding.
        #[arg(long)]
        full: bool,
        /// Print every report, not only failures.
        #[arg(long)]
        verbose: bool,
    },
    /// Report whether a game lies in Transition Logic.
    Fragment {
        #[arg(long)]
        game: String,
        /// Resolve names against this model instead of accepting any.
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

const OK: u8 = 0;
const NEGATIVE: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exceeded: {}", msg);
            ExitCode::from(3)
        }
    }
}

fn verdict(b: bool, yes: &str, no: &str) -> u8 {
    println!("{}", if b { yes } else { no });
    if b {
        OK
    } else {
        NEGATIVE
    }
}

fn handle(engine: EngineArg, in_fragment: bool, budget: Budget) -> EngineHandle {
    let kind = match engine {
        EngineArg::Reference => EngineKind::Reference,
        EngineArg::Transition => EngineKind::Transition,
        EngineArg::Auto if in_fragment => EngineKind::Transition,
        EngineArg::Auto => EngineKind::Reference,
    };
    EngineHandle::new(kind, budget)
}

fn load(path: &PathBuf) -> Result<Model, Failure> {
    load_model(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))
}

fn team(text: &str, m: &Model) -> Result<Team, Failure> {
    parse_team(text, m).map_err(usage)
}

fn run(command: Command) -> Result<u8, Failure> {
    let budget = Budget::from_env().map_err(usage)?;
    let env = ParamEnv::new();
    match command {
        Command::Check {
            model,
            team: t,
            formula,
            engine,
        } => {
            let m = load(&model)?;
            let x = team(&t, &m)?;
            let phi = parse_belief(&formula, &m).map_err(usage)?;
            let h = handle(engine, fragment_check(&phi).in_fragment, budget);
            Ok(verdict(satisfies(&m, x, &phi, &env, &h)?, "SAT", "UNSAT"))
        }
        Command::Truth {
            model,
            formula,
            engine,
            cap,
        } => {
            let m = load(&model)?;
            let phi = parse_belief(&formula, &m).map_err(usage)?;
            let h = handle(engine, fragment_check(&phi).in_fragment, budget);
            let failing = first_failing_team(&m, &phi, &h, cap)?;
            Ok(verdict(failing.is_none(), "TRUE", "FALSE"))
        }
        Command::Strategies {
            model,
            team: t,
            game,
        } => {
            let m = load(&model)?;
            let x = team(&t, &m)?;
            let g = parse_game(&game, &m).map_err(usage)?;
            let h = EngineHandle::new(EngineKind::Reference, budget);
            let set = strategies(&m, &g, x, &env, &h)?;
            for (i, t) in set.iter().enumerate() {
                println!("-- strategy {}", i + 1);
                print!("{}", t.render(&m));
            }
            println!("{} strategies", set.len());
            Ok(OK)
        }
        Command::Successors {
            model,
            team: t,
            game,
        } => {
            let m = load(&model)?;
            let x = team(&t, &m)?;
            let g = parse_game(&game, &m).map_err(usage)?;
            let h = EngineHandle::new(EngineKind::Transition, budget);
            for y in successors(&m, &g, x, &env, &h)? {
                println!("{}", m.display_team(y));
            }
            Ok(OK)
        }
        Command::Equiv { model, f1, f2, cap } => {
            let m = load(&model)?;
            let a = parse_belief(&f1, &m).map_err(usage)?;
            let b = parse_belief(&f2, &m).map_err(usage)?;
            let ha = handle(EngineArg::Auto, fragment_check(&a).in_fragment, budget);
            let hb = handle(EngineArg::Auto, fragment_check(&b).in_fragment, budget);
            let n = m.assignment_count();
            if n > cap {
                return Err(EvalError::TooManyAssignments { assignments: n, cap }.into());
            }
            let mut teams: Vec<Team> = m.full_team().subteams().collect();
            teams.sort();
            for x in teams {
                let va = satisfies(&m, x, &a, &env, &ha)?;
                let vb = satisfies(&m, x, &b, &env, &hb)?;
                if va != vb {
                    let word = |v: bool| if v { "SAT" } else { "UNSAT" };
                    println!(
                        "disagree at {}: f1 {}, f2 {}",
                        m.display_team(x),
                        word(va),
                        word(vb)
                    );
                    return Ok(NEGATIVE);
                }
            }
            println!("agree");
            Ok(OK)
        }
        Command::Diff {
            mode,
            seed,
            count,
            depth,
            max_domain,
            max_team,
            full,
            verbose,
        } => {
            if max_domain == 0 || count == 0 {
                return Err(usage("--count and --max-domain must be positive"));
            }
            let (mode, kind, fragment) = match mode {
                ModeArg::Semantics => (
                    DiffMode::Semantics,
                    FormulaKind::Game,
                    if full {
                        Fragment::Full
                    } else {
                        Fragment::TransitionLogic
                    },
                ),
                ModeArg::Sugar => (DiffMode::Sugar, FormulaKind::Belief, Fragment::Full),
            };
            let config = CorpusConfig {
                size: count,
                depth,
                max_domain,
                max_team_size: max_team,
                fragment,
                kind,
                ..CorpusConfig::default()
            };
            let corpus = gen_corpus(seed, &config);
            let reports = run_diff(&corpus, mode, budget);
            for r in &reports {
                if verbose || matches!(r.status, Status::Disagree | Status::Budget) {
                    println!("{}", r);
                }
            }
            let s = summarize(&reports);
            println!(
                "seed {} items {}: agree {} disagree {} budget {} outside {}",
                seed,
                reports.len(),
                s.agree,
                s.disagree,
                s.budget,
                s.outside
            );
            Ok(if s.disagree > 0 {
                NEGATIVE
            } else if s.budget > 0 {
                3
            } else {
                OK
            })
        }
        Command::Fragment { game, model } => {
            let g = match model {
                Some(path) => parse_game(&game, &load(&path)?),
                None => FormulaParser::schemaless().game(&game),
            }
            .map_err(usage)?;
            let report = fragment_check_game(&g);
            print!("{}", report);
            Ok(if report.in_fragment { OK } else { NEGATIVE })
        }
    }
}
