//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! game    := alt
//! alt     := seq (('+' | '||') seq)*
//! seq     := post (';' post)*
//! post    := gatom ('*' | '/' '{' vars '}')*
//! gatom   := 'eps' | '#' var | '!' var | '?' '(' belief ')' | '(' game ')'
//!
//! belief  := imp ('<->' imp)*
//! imp     := or (('->' | '~>') imp)?
//! or      := and (('\/' | '(+)') and)*
//! and     := unary ('/\' unary)*
//! unary   := '~' unary | '<' game '>' unary | '[' game ']' unary
//!          | '<sub>' unary | '[sub]' unary
//!          | ('E' | 'A') param '.' belief | 'delta' term '.' belief
//!          | atom
//! atom    := 'top' | 'bot' | R '(' terms ')' | '-' R '(' terms ')'
//!          | 'dep' '(' terms ')' | ('inc' | 'exc') '(' terms ';' terms ')'
//!          | 'indep' '(' terms? ';' terms? ';' terms? ')'
//!          | '(' terms ')' '!=' '(' terms ')' | '(' belief ')'
//!          | term ('=' | '!=') term
//! ```
//!
//! Binder bodies extend as far to the right as possible. Identifiers are
//! resolved against the model: bound parameters first, then team variables,
//! then constants.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, Spanned, Tok};
use super::{BeliefFormula, GameFormula};
use crate::model::{Model, RESERVED_WORDS};
use crate::term::Term;


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.column, self.message)
    }
}

pub fn parse_game(text: &str, model: &Model) -> Result<GameFormula, ParseError> {
    Parser::new(model).game(text)
}

pub fn parse_belief(text: &str, model: &Model) -> Result<BeliefFormula, ParseError> {
    Parser::new(model).belief(text)
}

/// Parser bound to a model signature, optionally with free parameter variables.
pub struct Parser<'m> {
    model: Option<&'m Model>,
    free_params: Vec<String>,
}

impl<'m> Parser<'m> {
    pub fn new(model: &'m Model) -> Self {
        Parser {
            model: Some(model),
            free_params: Vec::new(),
        }
    }

    /// A parser without a signature: unknown names are team variables, and
    /// `name(..)` is a relation in formula position and a function in term
    /// position, of any arity.
    pub fn schemaless() -> Parser<'static> {
        Parser {
            model: None,
            free_params: Vec::new(),
        }
    }

    /// Allows the given parameter variables to occur free.
    pub fn with_free_params<S: AsRef<str>>(mut self, params: &[S]) -> Self {
        self.free_params = params.iter().map(|p| p.as_ref().to_string()).collect();
        self
    }

    pub fn game(&self, text: &str) -> Result<GameFormula, ParseError> {
        let mut st = State::new(self, text)?;
        let g = st.game()?;
        st.expect_end()?;
        Ok(g)
    }

    pub fn belief(&self, text: &str) -> Result<BeliefFormula, ParseError> {
        let mut st = State::new(self, text)?;
        let phi = st.belief()?;
        st.expect_end()?;
        Ok(phi)
    }
}

struct State<'p, 'm> {
    parser: &'p Parser<'m>,
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
}

impl<'p, 'm> State<'p, 'm> {
    fn new(parser: &'p Parser<'m>, text: &str) -> Result<Self, ParseError> {
        Ok(State {
            parser,
            toks: tokenize(text)?,
            pos: 0,
            scope: parser.free_params.clone(),
        })
    }

    fn model(&self) -> Option<&'m Model> {
        self.parser.model
    }

    fn is_relation(&self, name: &str) -> bool {
        self.model().map_or(true, |m| m.relation(name).is_some())
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.col(), msg))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            t => self.error(format!("unexpected {} after formula", t.describe())),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED_WORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {}", t.describe())),
        }
    }

    fn team_var(&mut self) -> Result<String, ParseError> {
        let col = self.col();
        let v = self.ident()?;
        if self.model().map_or(false, |m| m.var_index(&v).is_none()) {
            return Err(ParseError::new(col, format!("undeclared variable `{}`", v)));
        }
        Ok(v)
    }

    // ---- games ----

    fn game(&mut self) -> Result<GameFormula, ParseError> {
        let mut left = self.game_seq()?;
        loop {
            let col = self.col();
            if self.eat(&Tok::Plus) {
                let right = self.game_seq()?;
                left = GameFormula::choice(left, right);
            } else if self.eat(&Tok::ParBar) {
                let right = self.game_seq()?;
                left = GameFormula::par(left, right).map_err(|m| ParseError::new(col, m))?;
            } else {
                return Ok(left);
            }
        }
    }

    fn game_seq(&mut self) -> Result<GameFormula, ParseError> {
        let mut left = self.game_postfix()?;
        while self.eat(&Tok::Semi) {
            let right = self.game_postfix()?;
            left = GameFormula::seq(left, right);
        }
        Ok(left)
    }

    fn game_postfix(&mut self) -> Result<GameFormula, ParseError> {
        let mut g = self.game_atom()?;
        loop {
            if self.eat(&Tok::Star) {
                g = GameFormula::star(g);
            } else if self.eat(&Tok::Slash) {
                self.expect(Tok::LBrace)?;
                let mut vars = BTreeSet::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        vars.insert(self.team_var()?);
                        if self.eat(&Tok::RBrace) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                g = GameFormula::Hide(Box::new(g), vars);
            } else {
                return Ok(g);
            }
        }
    }

    fn game_atom(&mut self) -> Result<GameFormula, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "eps" => {
                self.bump();
                Ok(GameFormula::Skip)
            }
            Tok::Hash => {
                self.bump();
                Ok(GameFormula::Choose(self.team_var()?))
            }
            Tok::Bang => {
                self.bump();
                Ok(GameFormula::Universal(self.team_var()?))
            }
            Tok::Question => {
                self.bump();
                self.expect(Tok::LParen)?;
                let phi = self.belief()?;
                self.expect(Tok::RParen)?;
                Ok(GameFormula::test(phi))
            }
            Tok::LParen => {
                self.bump();
                let g = self.game()?;
                self.expect(Tok::RParen)?;
                Ok(g)
            }
            t => self.error(format!("expected a game formula, found {}", t.describe())),
        }
    }

    // ---- belief formulas ----

    fn belief(&mut self) -> Result<BeliefFormula, ParseError> {
        let mut left = self.implication()?;
        while self.eat(&Tok::Iff) {
            let right = self.implication()?;
            left = BeliefFormula::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<BeliefFormula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            Ok(BeliefFormula::implies(left, right))
        } else if self.eat(&Tok::LeadsTo) {
            let right = self.implication()?;
            Ok(BeliefFormula::IntImplies(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<BeliefFormula, ParseError> {
        let mut left = self.conjunction()?;
        loop {
            if self.eat(&Tok::Or) {
                left = BeliefFormula::or(left, self.conjunction()?);
            } else if self.eat(&Tok::Tensor) {
                left = BeliefFormula::tensor(left, self.conjunction()?);
            } else {
                return Ok(left);
            }
        }
    }

    fn conjunction(&mut self) -> Result<BeliefFormula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            left = BeliefFormula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        let col = self.col();
        let p = self.ident()?;
        let clash = self.model().map_or(false, |m| {
            m.var_index(&p).is_some()
                || m.constant(&p).is_some()
                || m.relation(&p).is_some()
                || m.function(&p).is_some()
        });
        if clash {
            return Err(ParseError::new(
                col,
                format!("parameter `{}` clashes with a model symbol", p),
            ));
        }
        Ok(p)
    }

    fn unary(&mut self) -> Result<BeliefFormula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(BeliefFormula::not(self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let g = self.game()?;
                self.expect(Tok::Gt)?;
                Ok(BeliefFormula::diamond(g, self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let g = self.game()?;
                self.expect(Tok::RBracket)?;
                Ok(BeliefFormula::square(g, self.unary()?))
            }
            Tok::SubDiamond => {
                self.bump();
                Ok(BeliefFormula::SubDiamond(Box::new(self.unary()?)))
            }
            Tok::SubSquare => {
                self.bump();
                Ok(BeliefFormula::SubSquare(Box::new(self.unary()?)))
            }
            Tok::Ident(kw) if kw == "E" || kw == "A" => {
                self.bump();
                let p = self.binder_name()?;
                self.expect(Tok::Dot)?;
                self.scope.push(p.clone());
                let body = self.belief();
                self.scope.pop();
                let body = Box::new(body?);
                Ok(if kw == "E" {
                    BeliefFormula::Exists(p, body)
                } else {
                    BeliefFormula::Forall(p, body)
                })
            }
            Tok::Ident(kw) if kw == "delta" => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::Dot)?;
                Ok(BeliefFormula::Announce(t, Box::new(self.belief()?)))
            }
            _ => self.atom(),
        }
    }

    fn relation_args(&mut self, name: &str, col: usize) -> Result<Vec<Term>, ParseError> {
        let arity = match self.model() {
            Some(m) => Some(
                m.relation(name)
                    .ok_or_else(|| ParseError::new(col, format!("unknown relation `{}`", name)))?
                    .arity,
            ),
            None => None,
        };
        self.expect(Tok::LParen)?;
        let args = if self.eat(&Tok::RParen) {
            Vec::new()
        } else {
            let a = self.terms()?;
            self.expect(Tok::RParen)?;
            a
        };
        if let Some(arity) = arity.filter(|&a| a != args.len()) {
            return Err(ParseError::new(
                col,
                format!(
                    "relation `{}` expects {} arguments, got {}",
                    name,
                    arity,
                    args.len()
                ),
            ));
        }
        Ok(args)
    }

    fn atom(&mut self) -> Result<BeliefFormula, ParseError> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "top" => {
                self.bump();
                Ok(BeliefFormula::Top)
            }
            Tok::Ident(kw) if kw == "bot" => {
                self.bump();
                Ok(BeliefFormula::Bot)
            }
            Tok::Ident(kw) if kw == "dep" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let ts = self.terms()?;
                self.expect(Tok::RParen)?;
                Ok(BeliefFormula::Dep(ts))
            }
            Tok::Ident(kw) if kw == "inc" || kw == "exc" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.terms()?;
                self.expect(Tok::Semi)?;
                let b = self.terms()?;
                self.expect(Tok::RParen)?;
                if a.len() != b.len() {
                    return Err(ParseError::new(
                        col,
                        format!("`{}` needs tuples of equal length", kw),
                    ));
                }
                Ok(if kw == "inc" {
                    BeliefFormula::Inc(a, b)
                } else {
                    BeliefFormula::Exc(a, b)
                })
            }
            Tok::Ident(kw) if kw == "indep" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.opt_terms(&Tok::Semi)?;
                self.expect(Tok::Semi)?;
                let b = self.opt_terms(&Tok::Semi)?;
                self.expect(Tok::Semi)?;
                let c = self.opt_terms(&Tok::RParen)?;
                self.expect(Tok::RParen)?;
                Ok(BeliefFormula::Indep(a, b, c))
            }
            Tok::Minus => {
                self.bump();
                let col = self.col();
                let r = self.ident()?;
                let args = self.relation_args(&r, col)?;
                Ok(BeliefFormula::NegRel(r, args))
            }
            Tok::Ident(r) if self.peek_at(1) == &Tok::LParen && self.is_relation(&r) => {
                let save = self.pos;
                self.bump();
                let args = self.relation_args(&r, col)?;
                if self.model().is_none() && matches!(self.peek(), Tok::Eq | Tok::NotEq) {
                    self.pos = save;
                    return self.equation();
                }
                Ok(BeliefFormula::Rel(r, args))
            }
            Tok::LParen => {
                let save = self.pos;
                if let Ok(Some(phi)) = self.try_tuple_neq() {
                    return Ok(phi);
                }
                self.pos = save;
                self.bump();
                let phi = self.belief()?;
                self.expect(Tok::RParen)?;
                Ok(phi)
            }
            _ => self.equation(),
        }
    }

    fn equation(&mut self) -> Result<BeliefFormula, ParseError> {
        let left = self.term()?;
        if self.eat(&Tok::Eq) {
            Ok(BeliefFormula::Eq(left, self.term()?))
        } else if self.eat(&Tok::NotEq) {
            Ok(BeliefFormula::Neq(left, self.term()?))
        } else {
            self.error(format!(
                "expected `=` or `!=` after term, found {}",
                self.peek().describe()
            ))
        }
    }

    fn try_tuple_neq(&mut self) -> Result<Option<BeliefFormula>, ParseError> {
        self.expect(Tok::LParen)?;
        let left = self.terms()?;
        self.expect(Tok::RParen)?;
        if !self.eat(&Tok::NotEq) {
            return Ok(None);
        }
        let col = self.col();
        self.expect(Tok::LParen)?;
        let right = self.terms()?;
        self.expect(Tok::RParen)?;
        if left.len() != right.len() {
            return Err(ParseError::new(col, "tuple inequality needs equal lengths"));
        }
        Ok(Some(BeliefFormula::TupleNeq(left, right)))
    }

    fn terms(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut out = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            out.push(self.term()?);
        }
        Ok(out)
    }

    fn opt_terms(&mut self, stop: &Tok) -> Result<Vec<Term>, ParseError> {
        if self.peek() == stop {
            Ok(Vec::new())
        } else {
            self.terms()
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let col = self.col();
        let name = self.ident()?;
        let model = self.model();
        if self.peek() == &Tok::LParen {
            let arity = match model.map(|m| m.function(&name)) {
                Some(Some(f)) => Some(f.arity),
                Some(None) => {
                    return Err(ParseError::new(col, format!("unknown function `{}`", name)))
                }
                None => None,
            };
            self.bump();
            let args = if self.eat(&Tok::RParen) {
                Vec::new()
            } else {
                let a = self.terms()?;
                self.expect(Tok::RParen)?;
                a
            };
            if let Some(arity) = arity.filter(|&a| a != args.len()) {
                return Err(ParseError::new(
                    col,
                    format!(
                        "function `{}` expects {} arguments, got {}",
                        name,
                        arity,
                        args.len()
                    ),
                ));
            }
            return Ok(Term::App(name, args));
        }
        let Some(m) = model else {
            return Ok(if self.scope.iter().any(|p| p == &name) {
                Term::Param(name)
            } else {
                Term::Var(name)
            });
        };
        if self.scope.iter().any(|p| p == &name) {
            Ok(Term::Param(name))
        } else if m.var_index(&name).is_some() {
            Ok(Term::Var(name))
        } else if m.constant(&name).is_some() {
            Ok(Term::Const(name))
        } else if m.function(&name).map_or(false, |f| f.arity == 0) {
            Ok(Term::App(name, Vec::new()))
        } else {
            Err(ParseError::new(col, format!("undeclared variable `{}`", name)))
        }
    }
}
