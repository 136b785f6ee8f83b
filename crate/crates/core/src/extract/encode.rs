use super::MealyMachine;
use crate::automata::{ProductState, Shape};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// State `i` is encoded as the binary number `i`.
    Unstructured,
    /// Concatenated per-component numbers, memories included.
    Structured,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Unstructured => "unstructured",
            Encoding::Structured => "structured",
        })
    }
}

impl FromStr for Encoding {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unstructured" => Ok(Encoding::Unstructured),
            "structured" => Ok(Encoding::Structured),
            _ => Err(format!("unknown encoding `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("structured encoding needs states that keep their product shape")]
    ShapeErased,
    #[error("structured encoding maps two states to the same code")]
    NotInjective,
    #[error("encoding needs {0} bits, at most 64 supported")]
    TooWide(usize),
}

/// Bit vectors for machine states; bit 0 is the first state variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateEncoding {
    pub width: usize,
    pub codes: Vec<u64>,
}

impl StateEncoding {
    /// Code of state `q` as a bit string, first state variable leftmost.
    pub fn render(&self, q: usize) -> String {
        (0..self.width).map(|b| if self.codes[q] >> b & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn decode(&self, code: u64) -> Option<usize> {
        self.codes.iter().position(|&c| c == code)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.codes.iter().all(|c| seen.insert(*c))
    }

    /// Same encoding XORed with the initial code, so state 0 gets the zero vector.
    pub fn normalised(&self) -> StateEncoding {
        let base = self.codes.first().copied().unwrap_or(0);
        StateEncoding { width: self.width, codes: self.codes.iter().map(|c| c ^ base).collect() }
    }
}

/// Bits needed for `n` distinct values.
pub(crate) fn bits_for(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Part {
    State(ProductState),
    Mem(u32),
    /// Memory of a subtree collapsed into a sink.
    Collapsed(bool),
}

/// Component values of `q` in shape order: leaves and then the memory of
/// each composite, children first.
fn parts(shape: &Shape, q: &ProductState, out: &mut Vec<Part>) -> Result<(), EncodeError> {
    match (shape, q) {
        (Shape::Leaf, q) => out.push(Part::State(q.clone())),
        (Shape::Node { children, memory }, ProductState::Node { children: qs, mem }) => {
            if children.len() != qs.len() {
                return Err(EncodeError::ShapeErased);
            }
            for (s, c) in children.iter().zip(qs) {
                parts(s, c, out)?;
            }
            if *memory {
                out.push(Part::Mem(*mem));
            }
        }
        (Shape::Node { children, memory }, sink @ (ProductState::Top | ProductState::Bot)) => {
            for s in children {
                parts(s, sink, out)?;
            }
            if *memory {
                out.push(Part::Collapsed(*sink == ProductState::Top));
            }
        }
        _ => return Err(EncodeError::ShapeErased),
    }
    Ok(())
}

fn structured(m: &MealyMachine) -> Result<StateEncoding, EncodeError> {
    let shape = m.shape.as_ref().ok_or(EncodeError::ShapeErased)?;
    let mut rows = Vec::with_capacity(m.len());
    for label in &m.labels {
        let q = label.as_ref().ok_or(EncodeError::ShapeErased)?;
        let mut ps = Vec::new();
        parts(shape, q, &mut ps)?;
        rows.push(ps);
    }
    let arity = rows.first().map_or(0, Vec::len);
    // Number the values of each component by first appearance.
    let mut numbering: Vec<HashMap<&Part, u64>> = vec![HashMap::new(); arity];
    let mut values = Vec::with_capacity(rows.len());
    for ps in &rows {
        let vs: Vec<u64> = ps
            .iter()
            .zip(numbering.iter_mut())
            .map(|(p, num)| {
                let next = num.len() as u64;
                *num.entry(p).or_insert(next)
            })
            .collect();
        values.push(vs);
    }
    // Every component gets at least one bit.
    let widths: Vec<usize> = numbering.iter().map(|n| bits_for(n.len()).max(1)).collect();
    let width: usize = widths.iter().sum();
    if width > 64 {
        return Err(EncodeError::TooWide(width));
    }
    let codes = values
        .iter()
        .map(|vs| {
            let mut offset = 0;
            let mut code = 0u64;
            for (v, w) in vs.iter().zip(&widths) {
                code |= v << offset;
                offset += w;
            }
            code
        })
        .collect();
    let enc = StateEncoding { width, codes };
    if enc.is_injective() {
        Ok(enc)
    } else {
        Err(EncodeError::NotInjective)
    }
}

/// Binary encoding of the machine states.
pub fn encode(m: &MealyMachine, mode: Encoding) -> Result<StateEncoding, EncodeError> {
    match mode {
        Encoding::Unstructured => {
            let width = bits_for(m.len());
            if width > 64 {
                return Err(EncodeError::TooWide(width));
            }
            Ok(StateEncoding { width, codes: (0..m.len() as u64).collect() })
        }
        Encoding::Structured => structured(m),
    }
}
