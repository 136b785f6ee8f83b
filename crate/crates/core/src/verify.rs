//! Independent checks: lasso membership for the automaton, model checking of
//! extracted controllers, and the competition quality metric.

use crate::automata::{Dpa, ProductState};
use crate::extract::MealyMachine;
use crate::ltl::Letter;
use crate::solver::scc;
use std::collections::HashMap;

/// The word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> LassoWord {
        assert!(!cycle.is_empty(), "the loop of a lasso must be nonempty");
        LassoWord { prefix, cycle }
    }
}

/// Run the automaton on the lasso until a (state, loop position) pair
/// repeats; accept iff the least colour on that cycle has the parity.
pub fn accepts_lasso(dpa: &Dpa, w: &LassoWord) -> bool {
    assert!(!w.cycle.is_empty());
    let mut q = dpa.initial();
    for &a in &w.prefix {
        q = dpa.step(&q, a).0;
    }
    let mut seen: HashMap<(ProductState, usize), usize> = HashMap::new();
    let mut colours = Vec::new();
    let mut k = 0;
    loop {
        let pos = k % w.cycle.len();
        if let Some(&start) = seen.get(&(q.clone(), pos)) {
            let min = colours[start..].iter().min().copied().expect("cycle is nonempty");
            return min % 2 == dpa.parity() % 2;
        }
        seen.insert((q.clone(), pos), k);
        let (next, c) = dpa.step(&q, w.cycle[pos]);
        colours.push(c);
        q = next;
        k += 1;
    }
}

/// How unspecified output bits are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// Unspecified bits are 0.
    Default,
    /// Every value of the unspecified bits (up to 8 per transition).
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("controller and automaton have different alphabets")]
    AlphabetMismatch,
}

const MAX_FREE_BITS: u32 = 8;

/// Does every run of `m` against any environment satisfy the automaton?
/// Builds the product of machine and automaton and looks for a reachable
/// cycle whose least colour has the wrong parity.
pub fn verify_controller(m: &MealyMachine, dpa: &Dpa, mode: Completion) -> Result<bool, VerifyError> {
    if &m.alphabet != dpa.alphabet() {
        return Err(VerifyError::AlphabetMismatch);
    }
    let ab = dpa.alphabet();
    let no = ab.num_outputs();
    let mut warned = false;
    let mut index: HashMap<(usize, ProductState), usize> = HashMap::new();
    let mut order = vec![(0usize, dpa.initial())];
    index.insert(order[0].clone(), 0);
    let mut edges: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let (s, q) = order[k].clone();
        k += 1;
        let mut out = Vec::new();
        for i in 0..(1u32 << m.num_inputs()) {
            let (s2, cube) = m.rows[s][i as usize];
            let free = !cube.care & crate::cube::mask(no);
            let outputs = match mode {
                Completion::All if free.count_ones() <= MAX_FREE_BITS => cube.minterms(no),
                Completion::All => {
                    if !warned {
                        log::warn!("more than {MAX_FREE_BITS} unspecified outputs, checking the default completion");
                        warned = true;
                    }
                    vec![cube.value]
                }
                Completion::Default => vec![cube.value],
            };
            for o in outputs {
                let (q2, c) = dpa.step(&q, ab.letter(i, o));
                let key = (s2, q2);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        order.push(key.clone());
                        index.insert(key, order.len() - 1);
                        order.len() - 1
                    }
                };
                out.push((id, c));
            }
        }
        edges.push(out);
    }
    let p = dpa.parity() % 2;
    // A bad cycle with least colour c lives inside an SCC of the edges with colour ≥ c.
    for c in (0..=dpa.max_colour()).filter(|c| c % 2 != p) {
        let adj: Vec<Vec<usize>> =
            edges.iter().map(|es| es.iter().filter(|e| e.1 >= c).map(|e| e.0).collect()).collect();
        let comp = scc(&adj);
        for (v, es) in edges.iter().enumerate() {
            if es.iter().any(|&(w, col)| col == c && comp[v] == comp[w]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Competition quality points for a solution of size `n` against a reference of size `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityScore {
    pub points: f64,
    pub n: usize,
    pub r: usize,
}

pub fn quality(n: usize, r: usize) -> QualityScore {
    let ratio = (n as f64 + 1.0) / (r as f64 + 1.0);
    QualityScore { points: (2.0 - ratio.log10()).clamp(0.0, 2.0), n, r }
}
