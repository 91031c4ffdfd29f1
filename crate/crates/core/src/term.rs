//! First-order terms and their evaluation under an assignment.

use std::fmt;

use crate::error::EvalError;
use crate::model::{Assignment, Element, Model, ParamEnv};

/// A term over constants, team variables, parameter variables and function symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A team variable.
    Var(String),
    /// A parameter variable.
    Param(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn param(name: &str) -> Term {
        Term::Param(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    /// Parameter variables occurring in the term.
    pub fn params<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Param(p) => out.push(p),
            Term::App(_, args) => args.iter().for_each(|a| a.params(out)),
            Term::Var(_) | Term::Const(_) => {}
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(n) | Term::Param(n) | Term::Const(n) => f.write_str(n),
            Term::App(n, args) => {
                write!(f, "{}(", n)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", a)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// `t⟨s⟩`: the value of `t` under `s` and the parameter bindings in `env`.
pub fn eval_term(
    term: &Term,
    s: Assignment,
    env: &ParamEnv,
    model: &Model,
) -> Result<Element, EvalError> {
    match term {
        Term::Var(v) => model
            .var_index(v)
            .map(|i| model.value(s, i))
            .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Term::Param(p) => env
            .get(p)
            .ok_or_else(|| EvalError::UnboundVariable(p.clone())),
        Term::Const(c) => model
            .constant(c)
            .ok_or_else(|| EvalError::MalformedTerm(format!("unknown constant `{}`", c))),
        Term::App(name, args) => {
            let func = model
                .function(name)
                .ok_or_else(|| EvalError::MalformedTerm(format!("unknown function `{}`", name)))?;
            if func.arity != args.len() {
                return Err(EvalError::MalformedTerm(format!(
                    "`{}` has arity {} but is applied to {} arguments",
                    name,
                    func.arity,
                    args.len()
                )));
            }
            let vals = args
                .iter()
                .map(|a| eval_term(a, s, env, model))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(func.apply(&vals, model.domain_size()))
        }
    }
}

/// `t̄⟨s⟩` for a tuple of terms.
pub fn eval_terms(
    terms: &[Term],
    s: Assignment,
    env: &ParamEnv,
    model: &Model,
) -> Result<Vec<Element>, EvalError> {
    terms.iter().map(|t| eval_term(t, s, env, model)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> Model {
        let mut m = Model::new(2, &["x", "y"]).unwrap();
        m.add_function("f", 1, vec![(vec![0], 1), (vec![1], 0)]).unwrap();
        m.add_constant("c", 0).unwrap();
        m
    }

    #[test]
    fn variable_and_constant_lookup() {
        let m = m2();
        let s = m.assignment(&[1, 0]).unwrap();
        let env = ParamEnv::new();
        assert_eq!(eval_term(&Term::var("x"), s, &env, &m).unwrap(), 1);
        assert_eq!(eval_term(&Term::constant("c"), s, &env, &m).unwrap(), 0);
    }

    #[test]
    fn nested_function_application() {
        let m = m2();
        let s = m.assignment(&[0, 0]).unwrap();
        let t = Term::app("f", vec![Term::app("f", vec![Term::var("x")])]);
        assert_eq!(eval_term(&t, s, &ParamEnv::new(), &m).unwrap(), 0);
        let once = Term::app("f", vec![Term::var("x")]);
        assert_eq!(eval_term(&once, s, &ParamEnv::new(), &m).unwrap(), 1);
    }

    #[test]
    fn errors() {
        let m = m2();
        let s = m.assignment(&[0, 0]).unwrap();
        let env = ParamEnv::new();
        assert_eq!(
            eval_term(&Term::param("p"), s, &env, &m),
            Err(EvalError::UnboundVariable("p".into()))
        );
        assert!(matches!(
            eval_term(&Term::app("f", vec![]), s, &env, &m),
            Err(EvalError::MalformedTerm(_))
        ));
        assert_eq!(
            eval_term(&Term::param("p"), s, &env.bind("p", 1), &m),
            Ok(1)
        );
    }
}
