//! Text formats for models and teams.
//!
//! ```text
//! # comment
//! domain 2
//! vars x y
//! relation R 1
//! 1
//!
//! function f 1
//! 0 -> 1
//! 1 -> 0
//! constant c 0
//! ```
//!
//! Relation tuples follow their header one per line until a blank line (or a
//! line that is not a tuple); `()` stands for the empty tuple. Function rows
//! continue while lines contain `->`.

use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{Element, Model, ModelError, Team};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("{0}")]
    Incomplete(String),
}

fn syntax(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text)
}

enum Block {
    None,
    Relation {
        name: String,
        arity: usize,
        line: usize,
        tuples: Vec<Vec<Element>>,
    },
    Function {
        name: String,
        arity: usize,
        line: usize,
        rows: Vec<(Vec<Element>, Element)>,
    },
}

fn numbers(words: &[&str], line: usize) -> Result<Vec<Element>, LoadError> {
    words
        .iter()
        .map(|w| {
            w.parse::<Element>()
                .map_err(|_| syntax(line, format!("expected an element, found `{}`", w)))
        })
        .collect()
}

fn is_tuple_line(words: &[&str]) -> bool {
    words == ["()"] || (!words.is_empty() && words.iter().all(|w| w.parse::<Element>().is_ok()))
}

fn flush(model: &mut Option<Model>, block: Block) -> Result<(), LoadError> {
    let Some(m) = model.as_mut() else {
        return Ok(());
    };
    match block {
        Block::None => Ok(()),
        Block::Relation {
            name,
            arity,
            line,
            tuples,
        } => m
            .add_relation(&name, arity, tuples)
            .map_err(|source| LoadError::Model { line, source }),
        Block::Function {
            name,
            arity,
            line,
            rows,
        } => m
            .add_function(&name, arity, rows)
            .map_err(|source| LoadError::Model { line, source }),
    }
}

/// Parses the model text format.
pub fn parse_model(text: &str) -> Result<Model, LoadError> {
    let mut domain: Option<usize> = None;
    let mut model: Option<Model> = None;
    let mut block = Block::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let words: Vec<&str> = content.split_whitespace().collect();

        match &mut block {
            Block::Relation { tuples, arity, .. } if is_tuple_line(&words) => {
                let tuple = if words == ["()"] { Vec::new() } else { numbers(&words, line)? };
                if tuple.len() != *arity {
                    return Err(syntax(
                        line,
                        format!("tuple has {} elements, expected {}", tuple.len(), arity),
                    ));
                }
                tuples.push(tuple);
                continue;
            }
            Block::Function { rows, arity, .. } if content.contains("->") => {
                let (lhs, rhs) = content.split_once("->").unwrap();
                let args = numbers(&lhs.split_whitespace().collect::<Vec<_>>(), line)?;
                if args.len() != *arity {
                    return Err(syntax(
                        line,
                        format!("row has {} arguments, expected {}", args.len(), arity),
                    ));
                }
                let value = numbers(&rhs.split_whitespace().collect::<Vec<_>>(), line)?;
                if value.len() != 1 {
                    return Err(syntax(line, "function row needs exactly one value"));
                }
                rows.push((args, value[0]));
                continue;
            }
            _ => {}
        }
        flush(&mut model, std::mem::replace(&mut block, Block::None))?;
        if words.is_empty() {
            continue;
        }

        let need_model = |model: &Option<Model>| {
            if model.is_none() {
                Err(syntax(line, "`domain` and `vars` must come first"))
            } else {
                Ok(())
            }
        };
        match words[0] {
            "domain" => {
                if domain.is_some() {
                    return Err(syntax(line, "duplicate `domain` declaration"));
                }
                let [_, n] = words[..] else {
                    return Err(syntax(line, "expected `domain N`"));
                };
                let n = n
                    .parse::<usize>()
                    .map_err(|_| syntax(line, format!("invalid domain size `{}`", n)))?;
                if n == 0 {
                    return Err(LoadError::Model {
                        line,
                        source: ModelError::EmptyDomain,
                    });
                }
                domain = Some(n);
            }
            "vars" => {
                if model.is_some() {
                    return Err(syntax(line, "duplicate `vars` declaration"));
                }
                let n = domain.ok_or_else(|| syntax(line, "`domain` must precede `vars`"))?;
                model = Some(
                    Model::new(n, &words[1..]).map_err(|source| LoadError::Model { line, source })?,
                );
            }
            "relation" | "function" => {
                need_model(&model)?;
                let [kw, name, arity] = words[..] else {
                    return Err(syntax(line, format!("expected `{} NAME ARITY`", words[0])));
                };
                let arity = arity
                    .parse::<usize>()
                    .map_err(|_| syntax(line, format!("invalid arity `{}`", arity)))?;
                let name = name.to_string();
                block = if kw == "relation" {
                    Block::Relation {
                        name,
                        arity,
                        line,
                        tuples: Vec::new(),
                    }
                } else {
                    Block::Function {
                        name,
                        arity,
                        line,
                        rows: Vec::new(),
                    }
                };
            }
            "constant" => {
                need_model(&model)?;
                let [_, name, value] = words[..] else {
                    return Err(syntax(line, "expected `constant NAME ELEMENT`"));
                };
                let value = numbers(&[value], line)?[0];
                model
                    .as_mut()
                    .unwrap()
                    .add_constant(name, value)
                    .map_err(|source| LoadError::Model { line, source })?;
            }
            other => return Err(syntax(line, format!("unknown declaration `{}`", other))),
        }
    }
    flush(&mut model, block)?;
    model.ok_or_else(|| match domain {
        None => LoadError::Incomplete("missing `domain` declaration".into()),
        Some(_) => LoadError::Incomplete("missing `vars` declaration".into()),
    })
}

/// Canonical text rendering; [`parse_model`] reads it back unchanged.
pub fn model_to_text(m: &Model) -> String {
    let mut out = format!("domain {}\nvars {}\n", m.domain_size(), m.team_vars().join(" "));
    for (name, rel) in m.relations() {
        out.push_str(&format!("relation {} {}\n", name, rel.arity));
        for t in &rel.tuples {
            if t.is_empty() {
                out.push_str("()\n");
            } else {
                let words: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                out.push_str(&words.join(" "));
                out.push('\n');
            }
        }
        out.push('\n');
    }
    for (name, f) in m.functions() {
        out.push_str(&format!("function {} {}\n", name, f.arity));
        for (args, v) in f.rows(m.domain_size()) {
            let words: Vec<String> = args.iter().map(|e| e.to_string()).collect();
            let lhs = words.join(" ");
            if lhs.is_empty() {
                out.push_str(&format!("-> {}\n", v));
            } else {
                out.push_str(&format!("{} -> {}\n", lhs, v));
            }
        }
        out.push('\n');
    }
    for (name, v) in m.constants() {
        out.push_str(&format!("constant {} {}\n", name, v));
    }
    out
}

/// First 16 hex digits of the SHA-256 of the canonical rendering.
pub fn model_digest(m: &Model) -> String {
    let hash = Sha256::digest(model_to_text(m).as_bytes());
    hex::encode(&hash[..8])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid team `{text}`: {message}")]
pub struct TeamError {
    pub text: String,
    pub message: String,
}

/// Parses `{x=0 y=0; x=1 y=1}`; every assignment must bind every team variable.
pub fn parse_team(text: &str, m: &Model) -> Result<Team, TeamError> {
    let err = |message: String| TeamError {
        text: text.to_string(),
        message,
    };
    let body = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| err("expected braces".into()))?;
    let mut team = Team::EMPTY;
    for part in body.split(';') {
        let part = part.trim();
        if part.is_empty() {
            if body.trim().is_empty() {
                continue;
            }
            return Err(err("empty assignment".into()));
        }
        let mut values: Vec<Option<Element>> = vec![None; m.team_vars().len()];
        for binding in part.split_whitespace() {
            let (var, val) = binding
                .split_once('=')
                .ok_or_else(|| err(format!("expected var=value, found `{}`", binding)))?;
            let idx = m
                .var_index(var)
                .ok_or_else(|| err(format!("undeclared variable `{}`", var)))?;
            let val: Element = val
                .parse()
                .map_err(|_| err(format!("invalid element `{}`", val)))?;
            if val >= m.domain_size() {
                return Err(err(format!("element {} out of range", val)));
            }
            if values[idx].replace(val).is_some() {
                return Err(err(format!("variable `{}` bound twice", var)));
            }
        }
        let values: Vec<Element> = values
            .iter()
            .zip(m.team_vars())
            .map(|(v, name)| v.ok_or_else(|| err(format!("`{}` unbound in `{}`", name, part))))
            .collect::<Result<_, _>>()?;
        team.insert(m.assignment(&values).map_err(|e| err(e.to_string()))?);
    }
    Ok(team)
}
