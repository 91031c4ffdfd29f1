//! Model and team I/O, random corpora and differential runs.

pub mod corpus;
pub mod diff;
pub mod io;

pub use corpus::{gen_corpus, Corpus, CorpusConfig, CorpusItem, Formula, FormulaKind, Fragment};
pub use diff::{diff_item, run_diff, summarize, DiffMode, DiffReport, Mismatch, Status, Summary};
pub use io::{load_model, model_digest, model_to_text, parse_model, parse_team, LoadError, TeamError};
