use super::bdd::{Bdd, Ref};
use super::encode::{encode, EncodeError, Encoding, StateEncoding};
use super::{reduce_mealy, write_aiger, MealyMachine};
use crate::cube::Cube;
use crate::ltl::Alphabet;
use std::collections::HashMap;
use std::fmt;

/// AIGER literal: twice the variable index, plus one if negated. Variable 0
/// is the constant false.
pub type Lit = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Latch {
    pub name: String,
    pub next: Lit,
}

/// And-inverter graph with latches resetting to 0. Variables are numbered
/// inputs first, then latches, then and-gates in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub inputs: Vec<String>,
    pub latches: Vec<Latch>,
    /// (right-hand side 0, right-hand side 1) of each and-gate.
    pub ands: Vec<(Lit, Lit)>,
    pub outputs: Vec<(String, Lit)>,
}

impl Circuit {
    /// And-gates plus latches.
    pub fn size(&self) -> usize {
        self.ands.len() + self.latches.len()
    }

    pub fn max_var(&self) -> usize {
        self.inputs.len() + self.latches.len() + self.ands.len()
    }

    pub fn input_lit(&self, k: usize) -> Lit {
        2 * (k as Lit + 1)
    }

    pub fn latch_lit(&self, k: usize) -> Lit {
        2 * (self.inputs.len() + k + 1) as Lit
    }

    pub fn and_lit(&self, k: usize) -> Lit {
        2 * (self.inputs.len() + self.latches.len() + k + 1) as Lit
    }

    /// One clock step: output valuation and next latch values.
    pub fn step(&self, latches: &[bool], input: u32) -> (u32, Vec<bool>) {
        let (ni, nl) = (self.inputs.len(), self.latches.len());
        let mut val = vec![false; self.max_var() + 1];
        for k in 0..ni {
            val[k + 1] = input >> k & 1 == 1;
        }
        val[ni + 1..ni + 1 + nl].copy_from_slice(latches);
        let lit = |val: &[bool], l: Lit| val[(l >> 1) as usize] ^ (l & 1 == 1);
        for (k, &(a, b)) in self.ands.iter().enumerate() {
            val[ni + nl + 1 + k] = lit(&val, a) && lit(&val, b);
        }
        let out = self.outputs.iter().enumerate().fold(0u32, |acc, (k, &(_, l))| acc | (lit(&val, l) as u32) << k);
        let next = self.latches.iter().map(|l| lit(&val, l.next)).collect();
        (out, next)
    }

    /// Output valuations along an input word from the reset state.
    pub fn simulate(&self, inputs: &[u32]) -> Vec<u32> {
        let mut state = vec![false; self.latches.len()];
        inputs
            .iter()
            .map(|&i| {
                let (o, next) = self.step(&state, i);
                state = next;
                o
            })
            .collect()
    }

    /// Fully specified Mealy machine over the reachable latch valuations.
    pub fn to_mealy(&self, alphabet: &Alphabet) -> MealyMachine {
        let ni = self.inputs.len();
        let no = self.outputs.len();
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut order = vec![vec![false; self.latches.len()]];
        index.insert(order[0].clone(), 0);
        let mut rows = Vec::new();
        let mut k = 0;
        while k < order.len() {
            let s = order[k].clone();
            k += 1;
            let mut row = Vec::with_capacity(1 << ni);
            for i in 0..(1u32 << ni) {
                let (o, next) = self.step(&s, i);
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    order.push(next);
                    order.len() - 1
                });
                row.push((id, Cube::minterm(o, no)));
            }
            rows.push(row);
        }
        MealyMachine { alphabet: alphabet.clone(), labels: vec![None; rows.len()], rows, shape: None }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_aiger(self))
    }
}

/// Builder with structural hashing and constant propagation.
struct Aig {
    first_and: u32,
    ands: Vec<(Lit, Lit)>,
    table: HashMap<(Lit, Lit), Lit>,
}

impl Aig {
    fn and(&mut self, a: Lit, b: Lit) -> Lit {
        let (a, b) = (a.max(b), a.min(b));
        if b == 0 || a == b ^ 1 {
            return 0;
        }
        if b == 1 || a == b {
            return a;
        }
        if let Some(&l) = self.table.get(&(a, b)) {
            return l;
        }
        let l = 2 * (self.first_and + self.ands.len() as u32);
        self.ands.push((a, b));
        self.table.insert((a, b), l);
        l
    }

    fn or(&mut self, a: Lit, b: Lit) -> Lit {
        self.and(a ^ 1, b ^ 1) ^ 1
    }

    /// Multiplexer `x ? hi : lo` with the constant cases folded.
    fn mux(&mut self, x: Lit, hi: Lit, lo: Lit) -> Lit {
        match (hi, lo) {
            _ if hi == lo => hi,
            (1, 0) => x,
            (0, 1) => x ^ 1,
            (0, _) => self.and(x ^ 1, lo),
            (_, 0) => self.and(x, hi),
            (1, _) => self.or(x, lo),
            (_, 1) => self.or(x ^ 1, hi),
            _ => {
                let a = self.and(x, hi);
                let b = self.and(x ^ 1, lo);
                self.or(a, b)
            }
        }
    }

    /// Lower a decision diagram node by node; `var_lit` maps diagram
    /// variables to circuit literals.
    fn lower(&mut self, bdd: &Bdd, f: Ref, var_lit: &dyn Fn(u32) -> Lit, memo: &mut HashMap<Ref, Lit>) -> Lit {
        if f == Bdd::FALSE {
            return 0;
        }
        if f == Bdd::TRUE {
            return 1;
        }
        if let Some(&l) = memo.get(&f) {
            return l;
        }
        let hi = self.lower(bdd, bdd.high(f), var_lit, memo);
        let lo = self.lower(bdd, bdd.low(f), var_lit, memo);
        let l = self.mux(var_lit(bdd.var_of(f)), hi, lo);
        memo.insert(f, l);
        l
    }
}

/// Pick the smaller of the default-0 function and its restriction to the care set.
fn minimise(bdd: &mut Bdd, on: Ref, care: Ref) -> Ref {
    let r = bdd.restrict(on, care);
    if bdd.size(&[r]) < bdd.size(&[on]) {
        r
    } else {
        on
    }
}

/// Circuit implementing `m` under `enc`. Variables are ordered inputs first,
/// then state bits. Codes are XORed with the initial code so the reset
/// state encodes state 0.
pub fn to_circuit(m: &MealyMachine, enc: &StateEncoding) -> Circuit {
    let enc = enc.normalised();
    let (ni, no, w) = (m.num_inputs(), m.num_outputs(), enc.width);
    let letters = 1usize << ni;
    let mut bdd = Bdd::new();
    let state_cubes: Vec<Ref> = enc.codes.iter().map(|&c| bdd.minterm(ni as u32, w, c)).collect();
    let reachable = state_cubes.iter().fold(Bdd::FALSE, |acc, &s| bdd.or(acc, s));

    // Sum over states of (state cube ∧ per-state input function).
    let sum = |bdd: &mut Bdd, f: &dyn Fn(usize, usize) -> bool| {
        let mut acc = Bdd::FALSE;
        for (q, &sc) in state_cubes.iter().enumerate() {
            let table: Vec<bool> = (0..letters).map(|i| f(q, i)).collect();
            let g = bdd.from_table(0, ni, &table);
            let t = bdd.and(sc, g);
            acc = bdd.or(acc, t);
        }
        acc
    };

    let mut out_fns = Vec::with_capacity(no);
    for j in 0..no {
        let on = sum(&mut bdd, &|q, i| {
            let o = m.rows[q][i].1;
            o.care >> j & 1 == 1 && o.value >> j & 1 == 1
        });
        let care = sum(&mut bdd, &|q, i| m.rows[q][i].1.care >> j & 1 == 1);
        out_fns.push(minimise(&mut bdd, on, care));
    }
    let mut next_fns = Vec::with_capacity(w);
    for b in 0..w {
        let on = sum(&mut bdd, &|q, i| enc.codes[m.rows[q][i].0] >> b & 1 == 1);
        next_fns.push(minimise(&mut bdd, on, reachable));
    }

    let first_and = (ni + w + 1) as u32;
    let mut aig = Aig { first_and, ands: Vec::new(), table: HashMap::new() };
    let var_lit = |v: u32| 2 * (v + 1);
    let mut memo = HashMap::new();
    let outs: Vec<Lit> = out_fns.iter().map(|&f| aig.lower(&bdd, f, &var_lit, &mut memo)).collect();
    let nexts: Vec<Lit> = next_fns.iter().map(|&f| aig.lower(&bdd, f, &var_lit, &mut memo)).collect();
    Circuit {
        inputs: m.alphabet.inputs().to_vec(),
        latches: nexts.into_iter().enumerate().map(|(k, next)| Latch { name: format!("s{k}"), next }).collect(),
        ands: aig.ands,
        outputs: m.alphabet.outputs().iter().cloned().zip(outs).collect(),
    }
}

/// Encode (optionally after reduction) and lower to a circuit.
pub fn synthesize_circuit(m: &MealyMachine, encoding: Encoding, reduce: bool) -> Result<Circuit, EncodeError> {
    let reduced;
    let m = if reduce {
        reduced = reduce_mealy(m);
        &reduced
    } else {
        m
    };
    Ok(to_circuit(m, &encode(m, encoding)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Combination {
    ReducedUnstructured,
    RawStructured,
    RawUnstructured,
}

impl Combination {
    pub const ALL: [Combination; 3] =
        [Combination::ReducedUnstructured, Combination::RawStructured, Combination::RawUnstructured];

    pub fn settings(self) -> (Encoding, bool) {
        match self {
            Combination::ReducedUnstructured => (Encoding::Unstructured, true),
            Combination::RawStructured => (Encoding::Structured, false),
            Combination::RawUnstructured => (Encoding::Unstructured, false),
        }
    }
}

pub struct Portfolio {
    pub best: Combination,
    pub circuit: Circuit,
    /// Size of each combination; `None` where the encoding is unavailable.
    pub sizes: Vec<(Combination, Option<usize>)>,
}

/// Smallest circuit among the three combinations; ties go to the
/// lexicographically least AIGER text.
pub fn portfolio(m: &MealyMachine) -> Portfolio {
    let mut best: Option<(Combination, Circuit, String)> = None;
    let mut sizes = Vec::new();
    for comb in Combination::ALL {
        let (encoding, reduce) = comb.settings();
        match synthesize_circuit(m, encoding, reduce) {
            Ok(c) => {
                sizes.push((comb, Some(c.size())));
                let text = write_aiger(&c);
                let better = match &best {
                    None => true,
                    Some((_, b, t)) => (c.size(), &text) < (b.size(), t),
                };
                if better {
                    best = Some((comb, c, text));
                }
            }
            Err(e) => {
                log::info!("portfolio: {comb:?} unavailable ({e})");
                sizes.push((comb, None));
            }
        }
    }
    let (best, circuit, _) = best.expect("unstructured encodings always exist");
    Portfolio { best, circuit, sizes }
}
