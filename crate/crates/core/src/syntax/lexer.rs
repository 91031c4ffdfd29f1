use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Semi,
    Dot,
    Plus,
    ParBar,
    Star,
    Slash,
    Question,
    Hash,
    Bang,
    NotEq,
    Eq,
    Tilde,
    LeadsTo,
    Minus,
    Arrow,
    Iff,
    Or,
    And,
    Tensor,
    SubDiamond,
    SubSquare,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::End => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Plus => "+",
            Tok::ParBar => "||",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Question => "?",
            Tok::Hash => "#",
            Tok::Bang => "!",
            Tok::NotEq => "!=",
            Tok::Eq => "=",
            Tok::Tilde => "~",
            Tok::LeadsTo => "~>",
            Tok::Minus => "-",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::Or => "\\/",
            Tok::And => "/\\",
            Tok::Tensor => "(+)",
            Tok::SubDiamond => "<sub>",
            Tok::SubSquare => "[sub]",
            Tok::Ident(_) | Tok::End => "",
        }
    }
}

/// A token with its 1-based column.
pub(crate) type Spanned = (Tok, usize);

const SYMBOLS: &[(&str, Tok)] = &[
    ("<sub>", Tok::SubDiamond),
    ("[sub]", Tok::SubSquare),
    ("<->", Tok::Iff),
    ("(+)", Tok::Tensor),
    ("!=", Tok::NotEq),
    ("->", Tok::Arrow),
    ("~>", Tok::LeadsTo),
    ("\\/", Tok::Or),
    ("/\\", Tok::And),
    ("||", Tok::ParBar),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
    ("<", Tok::Lt),
    (">", Tok::Gt),
    (",", Tok::Comma),
    (";", Tok::Semi),
    (".", Tok::Dot),
    ("+", Tok::Plus),
    ("*", Tok::Star),
    ("/", Tok::Slash),
    ("?", Tok::Question),
    ("#", Tok::Hash),
    ("!", Tok::Bang),
    ("=", Tok::Eq),
    ("~", Tok::Tilde),
    ("-", Tok::Minus),
];

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '$'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut rest = src;
    let col = |rest: &str| src[..src.len() - rest.len()].chars().count() + 1;
    'outer: loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            out.push((Tok::End, col(rest)));
            return Ok(out);
        }
        let here = col(rest);
        let first = rest.chars().next().unwrap();
        if first.is_ascii_alphabetic() || first == '_' || first == '$' {
            let end = rest.find(|c: char| !ident_char(c)).unwrap_or(rest.len());
            out.push((Tok::Ident(rest[..end].to_string()), here));
            rest = &rest[end..];
            continue;
        }
        // `<sub>` and `[sub]` only when written without inner spaces
        for (sym, tok) in SYMBOLS {
            if rest.starts_with(sym) {
                out.push((tok.clone(), here));
                rest = &rest[sym.len()..];
                continue 'outer;
            }
        }
        return Err(ParseError::new(here, format!("unexpected character `{}`", first)));
    }
}
