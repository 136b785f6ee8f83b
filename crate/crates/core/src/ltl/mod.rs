//! LTL formulas: syntax, parsing, normalisation, acceptance-type annotation
//! and the formula derivative `af`.

mod annotate;
mod parse;
mod simplify;

pub use annotate::{annotate, classify, in_f_nu, in_g_mu, in_mu, in_nu, AcceptanceType, Annotated, BoolOp};
pub use parse::{parse, ParseError};
pub use simplify::{canonical, negate, simplify};

use std::fmt;

/// Maximum number of atomic propositions (letters are explicit bit-vectors).
pub const MAX_APS: usize = 24;

/// A letter: bit `i` is set iff proposition `i` holds.
pub type Letter = u32;

/// Index of an atomic proposition in an [`Alphabet`].
pub type Ap = u8;

/// Ordered input and output propositions. Inputs come first, so proposition
/// `i` is an input iff `i < inputs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    inputs: Vec<String>,
    outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("proposition `{0}` is declared more than once")]
    Duplicate(String),
    #[error("too many propositions ({0}, at most {MAX_APS} supported)")]
    TooMany(usize),
    #[error("invalid proposition name `{0}`")]
    InvalidName(String),
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(inputs: &[S], outputs: &[S]) -> Result<Self, AlphabetError> {
        let inputs: Vec<String> = inputs.iter().map(|s| s.as_ref().to_string()).collect();
        let outputs: Vec<String> = outputs.iter().map(|s| s.as_ref().to_string()).collect();
        let total = inputs.len() + outputs.len();
        if total > MAX_APS {
            return Err(AlphabetError::TooMany(total));
        }
        let mut seen = std::collections::HashSet::new();
        for name in inputs.iter().chain(outputs.iter()) {
            if !parse::is_valid_name(name) {
                return Err(AlphabetError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(AlphabetError::Duplicate(name.clone()));
            }
        }
        Ok(Alphabet { inputs, outputs })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn len(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, ap: Ap) -> &str {
        let i = ap as usize;
        if i < self.inputs.len() {
            &self.inputs[i]
        } else {
            &self.outputs[i - self.inputs.len()]
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Ap> {
        self.inputs.iter().chain(self.outputs.iter()).position(|n| n == name).map(|i| i as Ap)
    }

    /// Combine an input valuation and an output valuation into one letter.
    pub fn letter(&self, input: u32, output: u32) -> Letter {
        input | (output << self.inputs.len())
    }

    /// Split a letter into (input valuation, output valuation).
    pub fn split(&self, letter: Letter) -> (u32, u32) {
        let ni = self.inputs.len();
        (letter & ((1u32 << ni) - 1), letter >> ni)
    }
}

/// LTL formula. Below temporal operators the formula is in negation normal
/// form; `Iff` only occurs in the Boolean layer above them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    /// `Lit(a, true)` is `a`, `Lit(a, false)` is `!a`.
    Lit(Ap, bool),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn lit(ap: Ap, positive: bool) -> Formula {
        Formula::Lit(ap, positive)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(vec![a, b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(a: Formula) -> Formula {
        Formula::Next(Box::new(a))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// `F a`, stored as `tt U a`.
    pub fn eventually(a: Formula) -> Formula {
        Formula::until(Formula::True, a)
    }

    /// `G a`, stored as `ff R a`.
    pub fn globally(a: Formula) -> Formula {
        Formula::release(Formula::False, a)
    }

    pub fn is_temporal(&self) -> bool {
        matches!(self, Formula::Next(_) | Formula::Until(..) | Formula::Release(..))
    }

    /// Set of propositions occurring in the formula, as a bit mask.
    pub fn props(&self) -> u32 {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Lit(a, _) => 1 << a,
            Formula::And(cs) | Formula::Or(cs) => cs.iter().fold(0, |m, c| m | c.props()),
            Formula::Next(a) => a.props(),
            Formula::Iff(a, b) | Formula::Until(a, b) | Formula::Release(a, b) => a.props() | b.props(),
        }
    }

    /// Evaluate the propositional part at a letter, treating every temporal
    /// subformula as the value given by `temporal`.
    pub fn eval_with(&self, letter: Letter, temporal: &mut impl FnMut(&Formula) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Lit(a, pos) => ((letter >> a) & 1 == 1) == *pos,
            Formula::And(cs) => cs.iter().all(|c| c.eval_with(letter, temporal)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval_with(letter, temporal)),
            Formula::Iff(a, b) => a.eval_with(letter, temporal) == b.eval_with(letter, temporal),
            _ => temporal(self),
        }
    }

    /// Nesting depth of the syntax tree.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Lit(..) => 0,
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(|c| c.depth()).max().unwrap_or(0),
            Formula::Next(a) => 1 + a.depth(),
            Formula::Iff(a, b) | Formula::Until(a, b) | Formula::Release(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Printable form using the names of `alphabet`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> Display<'a> {
        Display { f: self, alphabet }
    }
}

/// The formula derivative: what remains to be satisfied after reading `letter`.
pub fn af(f: &Formula, letter: Letter) -> Formula {
    simplify(&af_raw(f, letter))
}

fn af_raw(f: &Formula, letter: Letter) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Lit(a, pos) => {
            if ((letter >> a) & 1 == 1) == *pos {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::And(cs) => Formula::And(cs.iter().map(|c| af_raw(c, letter)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| af_raw(c, letter)).collect()),
        Formula::Iff(a, b) => Formula::iff(af_raw(a, letter), af_raw(b, letter)),
        Formula::Next(a) => (**a).clone(),
        Formula::Until(a, b) => Formula::or(af_raw(b, letter), Formula::and(af_raw(a, letter), f.clone())),
        Formula::Release(a, b) => Formula::and(af_raw(b, letter), Formula::or(af_raw(a, letter), f.clone())),
    }
}

pub struct Display<'a> {
    f: &'a Formula,
    alphabet: &'a Alphabet,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self.f, self.alphabet, out)
    }
}

fn write_operand(f: &Formula, alphabet: &Alphabet, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::True | Formula::False | Formula::Lit(..) => write_formula(f, alphabet, out),
        _ => {
            write!(out, "(")?;
            write_formula(f, alphabet, out)?;
            write!(out, ")")
        }
    }
}

fn write_formula(f: &Formula, alphabet: &Alphabet, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::True => write!(out, "tt"),
        Formula::False => write!(out, "ff"),
        Formula::Lit(a, true) => write!(out, "{}", alphabet.name(*a)),
        Formula::Lit(a, false) => write!(out, "!{}", alphabet.name(*a)),
        Formula::And(cs) | Formula::Or(cs) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(out, "{sep}")?;
                }
                write_operand(c, alphabet, out)?;
            }
            Ok(())
        }
        Formula::Iff(a, b) => {
            write_operand(a, alphabet, out)?;
            write!(out, " <-> ")?;
            write_operand(b, alphabet, out)
        }
        Formula::Next(a) => {
            write!(out, "X ")?;
            write_operand(a, alphabet, out)
        }
        Formula::Until(a, b) if **a == Formula::True => {
            write!(out, "F ")?;
            write_operand(b, alphabet, out)
        }
        Formula::Release(a, b) if **a == Formula::False => {
            write!(out, "G ")?;
            write_operand(b, alphabet, out)
        }
        Formula::Until(a, b) | Formula::Release(a, b) => {
            let op = if matches!(f, Formula::Until(..)) { " U " } else { " R " };
            write_operand(a, alphabet, out)?;
            write!(out, "{op}")?;
            write_operand(b, alphabet, out)
        }
    }
}
