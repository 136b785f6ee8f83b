use super::{Alphabet, Ap, Formula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown proposition `{name}` at position {pos}")]
    UnknownProposition { pos: usize, name: String },
}

const KEYWORDS: &[&str] = &["X", "F", "G", "U", "R", "W", "M", "tt", "ff", "true", "false"];

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let rest = &text[i..];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = if rest.starts_with("<->") || rest.starts_with("<=>") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") || rest.starts_with("=>") {
            (Tok::Implies, 2)
        } else if rest.starts_with("&&") || rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("||") || rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else {
            match c {
                b'!' | b'~' => (Tok::Not, 1),
                b'&' => (Tok::And, 1),
                b'|' => (Tok::Or, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'0' => (Tok::Ident("ff".into()), 1),
                b'1' => (Tok::Ident("tt".into()), 1),
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
                    (Tok::Ident(rest[..len].to_string()), len)
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{}`", rest.chars().next().unwrap()),
                    })
                }
            }
        };
        toks.push((tok, i));
        i += len;
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

/// Parse tree before negation normal form.
#[derive(Debug, Clone)]
enum Raw {
    Const(bool),
    Prop(Ap),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Implies(Box<Raw>, Box<Raw>),
    Iff(Box<Raw>, Box<Raw>),
    Next(Box<Raw>),
    Finally(Box<Raw>),
    Globally(Box<Raw>),
    Until(Box<Raw>, Box<Raw>),
    Release(Box<Raw>, Box<Raw>),
    WeakUntil(Box<Raw>, Box<Raw>),
    StrongRelease(Box<Raw>, Box<Raw>),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn iff(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Raw::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Raw::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.and()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.or()?;
            return Ok(Raw::Or(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.binary_temporal()?;
        if *self.peek() == Tok::And {
            self.bump();
            let rhs = self.and()?;
            return Ok(Raw::And(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.unary()?;
        let op = match self.peek() {
            Tok::Ident(s) if matches!(s.as_str(), "U" | "R" | "W" | "M") => s.clone(),
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = Box::new(self.binary_temporal()?);
        let lhs = Box::new(lhs);
        Ok(match op.as_str() {
            "U" => Raw::Until(lhs, rhs),
            "R" => Raw::Release(lhs, rhs),
            "W" => Raw::WeakUntil(lhs, rhs),
            _ => Raw::StrongRelease(lhs, rhs),
        })
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        let pos = self.offset();
        match self.bump() {
            Tok::Not => Ok(Raw::Not(Box::new(self.unary()?))),
            Tok::LParen => {
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(name, pos),
            Tok::End => {
                self.pos = self.toks.len() - 1;
                self.error("unexpected end of input")
            }
            t => {
                self.pos -= 1;
                self.error(format!("unexpected token {t:?}"))
            }
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Raw, ParseError> {
        match name.as_str() {
            "tt" | "true" => return Ok(Raw::Const(true)),
            "ff" | "false" => return Ok(Raw::Const(false)),
            "U" | "R" | "W" | "M" => {
                self.pos -= 1;
                return self.error(format!("binary operator `{name}` is missing its left operand"));
            }
            _ => {}
        }
        if let Some(ap) = self.alphabet.lookup(&name) {
            return Ok(Raw::Prop(ap));
        }
        // Runs of unary temporal operators such as `GF` or `XX`.
        if name.bytes().all(|b| matches!(b, b'X' | b'F' | b'G')) {
            let mut inner = self.unary()?;
            for op in name.bytes().rev() {
                let b = Box::new(inner);
                inner = match op {
                    b'X' => Raw::Next(b),
                    b'F' => Raw::Finally(b),
                    _ => Raw::Globally(b),
                };
            }
            return Ok(inner);
        }
        Err(ParseError::UnknownProposition { pos, name })
    }
}

/// Parse `text` over the propositions of `alphabet`.
///
/// Operators by increasing binding strength: `<->`, `->` (both right
/// associative), `|`, `&`, the binary temporal operators `U R W M`, and the
/// unary `! X F G`. `tt`/`true`/`1` and `ff`/`false`/`0` are constants.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, alphabet };
    let raw = p.iff()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(nnf(&raw, false, false))
}

/// Push negations to the literals. Above temporal operators `<->` is kept,
/// below them it is expanded into conjunctions and disjunctions.
fn nnf(r: &Raw, neg: bool, temporal: bool) -> Formula {
    let b = |x: &Raw, n: bool| nnf(x, n, temporal);
    let t = |x: &Raw, n: bool| nnf(x, n, true);
    let and = |a, b| {
        if neg {
            Formula::or(a, b)
        } else {
            Formula::and(a, b)
        }
    };
    match r {
        Raw::Const(v) => {
            if *v != neg {
                Formula::True
            } else {
                Formula::False
            }
        }
        Raw::Prop(a) => Formula::Lit(*a, !neg),
        Raw::Not(x) => b(x, !neg),
        Raw::And(x, y) => and(b(x, neg), b(y, neg)),
        Raw::Or(x, y) => {
            if neg {
                Formula::and(b(x, true), b(y, true))
            } else {
                Formula::or(b(x, false), b(y, false))
            }
        }
        Raw::Implies(x, y) => {
            if neg {
                Formula::and(b(x, false), b(y, true))
            } else {
                Formula::or(b(x, true), b(y, false))
            }
        }
        Raw::Iff(x, y) => {
            if temporal {
                let pos = Formula::or(Formula::and(b(x, false), b(y, false)), Formula::and(b(x, true), b(y, true)));
                let negated = Formula::or(Formula::and(b(x, false), b(y, true)), Formula::and(b(x, true), b(y, false)));
                if neg {
                    negated
                } else {
                    pos
                }
            } else {
                Formula::iff(b(x, false), b(y, neg))
            }
        }
        Raw::Next(x) => Formula::next(t(x, neg)),
        Raw::Finally(x) => {
            if neg {
                Formula::globally(t(x, true))
            } else {
                Formula::eventually(t(x, false))
            }
        }
        Raw::Globally(x) => {
            if neg {
                Formula::eventually(t(x, true))
            } else {
                Formula::globally(t(x, false))
            }
        }
        Raw::Until(x, y) => {
            if neg {
                Formula::release(t(x, true), t(y, true))
            } else {
                Formula::until(t(x, false), t(y, false))
            }
        }
        Raw::Release(x, y) => {
            if neg {
                Formula::until(t(x, true), t(y, true))
            } else {
                Formula::release(t(x, false), t(y, false))
            }
        }
        // x W y = y R (x | y), and its negation !y U (!x & !y).
        Raw::WeakUntil(x, y) => {
            if neg {
                Formula::until(t(y, true), Formula::and(t(x, true), t(y, true)))
            } else {
                Formula::release(t(y, false), Formula::or(t(x, false), t(y, false)))
            }
        }
        // x M y = y U (x & y), and its negation !y R (!x | !y).
        Raw::StrongRelease(x, y) => {
            if neg {
                Formula::release(t(y, true), Formula::or(t(x, true), t(y, true)))
            } else {
                Formula::until(t(y, false), Formula::and(t(x, false), t(y, false)))
            }
        }
    }
}
