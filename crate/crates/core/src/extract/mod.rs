//! Controller extraction: Mealy machines from winning strategies, state
//! encodings, and circuits.

mod aiger;
mod bdd;
mod circuit;
mod encode;

pub use aiger::{read_aiger, write_aiger, AigerError};
pub use bdd::Bdd;
pub use circuit::{portfolio, synthesize_circuit, to_circuit, Circuit, Combination, Latch, Lit, Portfolio};
pub use encode::{encode, EncodeError, Encoding, StateEncoding};

use crate::arena::{Arena, NodeId, NodeKind};
use crate::automata::{Dpa, ProductState, Shape};
use crate::cube::{cover, covers, mask, Cube};
use crate::ltl::Alphabet;
use crate::solver::Strategy;
use std::collections::HashMap;
use std::fmt::Write as _;

/// Incompletely specified Mealy machine. State 0 is initial; every state
/// has one row per input letter.
#[derive(Clone, Debug, PartialEq)]
pub struct MealyMachine {
    pub alphabet: Alphabet,
    /// `rows[q][i]`: successor and output term on input letter `i`.
    pub rows: Vec<Vec<(usize, Cube)>>,
    /// Product state behind each machine state; `None` after merging.
    pub labels: Vec<Option<ProductState>>,
    /// Shape of the product states, if they still carry it.
    pub shape: Option<Shape>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("the strategy does not win node {0}")]
    NotWinning(NodeId),
}

impl MealyMachine {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.alphabet.num_inputs()
    }

    pub fn num_outputs(&self) -> usize {
        self.alphabet.num_outputs()
    }

    pub fn next(&self, q: usize, input: u32) -> usize {
        self.rows[q][input as usize].0
    }

    pub fn output(&self, q: usize, input: u32) -> Cube {
        self.rows[q][input as usize].1
    }

    /// Output terms and states visited along an input word, from state 0.
    pub fn run(&self, inputs: &[u32]) -> Vec<(usize, Cube)> {
        let mut q = 0;
        inputs
            .iter()
            .map(|&i| {
                let step = (q, self.output(q, i));
                q = self.next(q, i);
                step
            })
            .collect()
    }

    /// Text listing: one line per state and input cube with the successor
    /// and the output term.
    pub fn dump(&self) -> String {
        let ab = &self.alphabet;
        let mut out = format!(
            "mealy {} states, inputs [{}], outputs [{}]\n",
            self.len(),
            ab.inputs().join(", "),
            ab.outputs().join(", ")
        );
        let ni = self.num_inputs();
        for (q, row) in self.rows.iter().enumerate() {
            if let Some(Some(label)) = self.labels.get(q) {
                let _ = writeln!(out, "# {q} = {}", label.render(ab));
            }
            // Group input letters with identical behaviour, first occurrence order.
            let mut groups: Vec<((usize, Cube), Vec<u32>)> = Vec::new();
            for (i, step) in row.iter().enumerate() {
                match groups.iter_mut().find(|(s, _)| s == step) {
                    Some((_, is)) => is.push(i as u32),
                    None => groups.push((*step, vec![i as u32])),
                }
            }
            for ((to, o), is) in groups {
                for c in cover(&is, ni) {
                    let _ = writeln!(out, "{q} {} -> {to} : {}", c.render(ab.inputs()), o.render(ab.outputs()));
                }
            }
        }
        out
    }
}

/// Minimum-literal cube inside the set `on` of output valuations over `n`
/// variables. Exhaustive for up to 12 variables, greedy above. `on` must be
/// nonempty.
pub fn min_implicant(on: &[u32], n: usize) -> Cube {
    assert!(!on.is_empty(), "empty on-set");
    let mut member = vec![false; 1usize << n];
    for &m in on {
        member[m as usize] = true;
    }
    let inside = |c: Cube| c.minterms(n).iter().all(|&m| member[m as usize]);
    if n <= 12 {
        let mut cares: Vec<u32> = (0..=mask(n)).collect();
        cares.sort_by_key(|c| (c.count_ones(), *c));
        for care in cares {
            for &m in on {
                let c = Cube { care, value: m & care };
                if inside(c) {
                    return c;
                }
            }
        }
        unreachable!("a minterm is always an implicant");
    }
    let mut c = Cube::minterm(on[0], n);
    for bit in 0..n {
        let wider = Cube { care: c.care & !(1 << bit), value: c.value & !(1 << bit) };
        if inside(wider) {
            c = wider;
        }
    }
    c
}

/// Output valuations of the edges of controller node `u` chosen by `sigma`,
/// grouped by target in first-occurrence order.
fn choices(arena: &Arena, u: NodeId, sigma: &Strategy, no: usize) -> Vec<(NodeId, Vec<u32>)> {
    let mut out: Vec<(NodeId, Vec<u32>)> = Vec::new();
    for &k in &sigma.get(u).edges {
        let e = &arena.node(u).edges[k];
        let slot = match out.iter().position(|(t, _)| *t == e.to) {
            Some(s) => s,
            None => {
                out.push((e.to, Vec::new()));
                out.len() - 1
            }
        };
        for c in &e.label {
            out[slot].1.extend(c.minterms(no));
        }
    }
    for (_, os) in &mut out {
        os.sort_unstable();
        os.dedup();
    }
    out
}

/// Mealy machine following `sigma` from the initial node. Among successors
/// allowed on an input, states already in the machine are preferred, then
/// the successor with the most allowed outputs, then the lowest node id.
pub fn extract_mealy(arena: &Arena, sigma: &Strategy, dpa: &Dpa) -> Result<MealyMachine, ExtractError> {
    let ab = dpa.alphabet().clone();
    let (ni, no) = (ab.num_inputs(), ab.num_outputs());
    let mut order = vec![arena.initial()];
    let mut index: HashMap<NodeId, usize> = HashMap::from([(arena.initial(), 0)]);
    let mut rows = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        k += 1;
        let node = arena.node(v);
        if !matches!(node.kind, NodeKind::Env(_)) || arena.on_boundary(v) || v == crate::arena::BOT {
            return Err(ExtractError::NotWinning(v));
        }
        let mut row = Vec::with_capacity(1 << ni);
        for i in 0..(1u32 << ni) {
            let e = node.edges.iter().find(|e| covers(&e.label, i)).ok_or(ExtractError::NotWinning(v))?;
            // Sinks loop directly without an intermediate node.
            let (target, allowed) = if matches!(arena.node(e.to).kind, NodeKind::Env(_)) {
                (e.to, (0..=mask(no)).collect())
            } else {
                let opts = choices(arena, e.to, sigma, no);
                opts.into_iter()
                    .max_by_key(|(t, os)| (index.contains_key(t), os.len(), std::cmp::Reverse(*t)))
                    .ok_or(ExtractError::NotWinning(e.to))?
            };
            let next = *index.entry(target).or_insert_with(|| {
                order.push(target);
                order.len() - 1
            });
            row.push((next, min_implicant(&allowed, no)));
        }
        rows.push(row);
    }
    let labels = order.iter().map(|&v| arena.state(v).cloned()).collect();
    Ok(MealyMachine { alphabet: ab, rows, labels, shape: Some(dpa.shape()) })
}

/// Two output terms admit a common valuation.
fn consistent(a: Cube, b: Cube) -> bool {
    (a.care & b.care) & (a.value ^ b.value) == 0
}

fn meet(a: Cube, b: Cube) -> Cube {
    Cube { care: a.care | b.care, value: a.value | b.value }
}

/// Pairs of states that can never be merged: some input word leads to
/// conflicting output terms.
#[allow(clippy::needless_range_loop)]
fn incompatible(m: &MealyMachine) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut bad = vec![vec![false; n]; n];
    for p in 0..n {
        for q in 0..p {
            if m.rows[p].iter().zip(&m.rows[q]).any(|(a, b)| !consistent(a.1, b.1)) {
                bad[p][q] = true;
                bad[q][p] = true;
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..n {
            for q in 0..p {
                if !bad[p][q] && m.rows[p].iter().zip(&m.rows[q]).any(|(a, b)| bad[a.0][b.0]) {
                    bad[p][q] = true;
                    bad[q][p] = true;
                    changed = true;
                }
            }
        }
    }
    bad
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Greedy merging of compatible states. A merge of two states also merges
/// their successors, so each class has a well-defined successor class; a
/// merge is kept only if every resulting class is pairwise compatible.
/// Every completion of the result behaves like a completion of `m`.
pub fn reduce_mealy(m: &MealyMachine) -> MealyMachine {
    let n = m.len();
    let bad = incompatible(m);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut merged = false;
    for p in 0..n {
        for q in (p + 1)..n {
            if find(&mut parent, p) == find(&mut parent, q) || bad[p][q] {
                continue;
            }
            let mut trial = parent.clone();
            let mut stack = vec![(p, q)];
            while let Some((a, b)) = stack.pop() {
                let (ra, rb) = (find(&mut trial, a), find(&mut trial, b));
                if ra == rb {
                    continue;
                }
                trial[ra.max(rb)] = ra.min(rb);
                for i in 0..m.rows[a].len() {
                    stack.push((m.rows[a][i].0, m.rows[b][i].0));
                }
            }
            let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
            for s in 0..n {
                classes.entry(find(&mut trial, s)).or_default().push(s);
            }
            let ok = classes.values().all(|c| c.iter().all(|&x| c.iter().all(|&y| !bad[x][y])));
            if ok {
                parent = trial;
                merged = true;
            }
        }
    }
    if !merged {
        return m.clone();
    }
    // Renumber classes in breadth-first order from the initial class.
    let mut id: HashMap<usize, usize> = HashMap::new();
    let mut order = vec![find(&mut parent, 0)];
    id.insert(order[0], 0);
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for s in 0..n {
        members.entry(find(&mut parent, s)).or_default().push(s);
    }
    let mut rows = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let class = &members[&order[k]];
        k += 1;
        let width = m.rows[class[0]].len();
        let mut row = Vec::with_capacity(width);
        for i in 0..width {
            let out = class.iter().fold(Cube::TOP, |acc, &s| meet(acc, m.rows[s][i].1));
            let succ = find(&mut parent, m.rows[class[0]][i].0);
            let next = *id.entry(succ).or_insert_with(|| {
                order.push(succ);
                order.len() - 1
            });
            row.push((next, out));
        }
        rows.push(row);
    }
    MealyMachine { alphabet: m.alphabet.clone(), labels: vec![None; rows.len()], rows, shape: None }
}
