//! Shared test support: an independent LTL syntax tree with brute-force
//! semantics on lasso words, random formulas and games, a strict AIGER
//! grammar checker, and the specification corpus.
#![allow(dead_code)]

use lsynth::automata::{build, BuildOptions, Dpa, ProductState};
use lsynth::extract::{Circuit, MealyMachine, StateEncoding};
use lsynth::ltl::{annotate, parse, Alphabet};
use lsynth::solver::{Fixed, Game, Player};
use rand::Rng;
use std::collections::{HashMap, HashSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ltl {
    True,
    False,
    Ap(usize),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    X(Box<Ltl>),
    F(Box<Ltl>),
    G(Box<Ltl>),
    U(Box<Ltl>, Box<Ltl>),
    R(Box<Ltl>, Box<Ltl>),
    W(Box<Ltl>, Box<Ltl>),
    M(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    /// Fully parenthesised text in the library's input syntax.
    pub fn render(&self, names: &[String]) -> String {
        use Ltl::*;
        let bin = |a: &Ltl, op: &str, b: &Ltl| format!("({} {op} {})", a.render(names), b.render(names));
        match self {
            True => "true".into(),
            False => "false".into(),
            Ap(k) => names[*k].clone(),
            Not(a) => format!("!{}", a.render(names)),
            And(a, b) => bin(a, "&", b),
            Or(a, b) => bin(a, "|", b),
            Implies(a, b) => bin(a, "->", b),
            Iff(a, b) => bin(a, "<->", b),
            X(a) => format!("(X {})", a.render(names)),
            F(a) => format!("(F {})", a.render(names)),
            G(a) => format!("(G {})", a.render(names)),
            U(a, b) => bin(a, "U", b),
            R(a, b) => bin(a, "R", b),
            W(a, b) => bin(a, "W", b),
            M(a, b) => bin(a, "M", b),
        }
    }

    fn children(&self) -> Vec<&Ltl> {
        use Ltl::*;
        match self {
            True | False | Ap(_) => vec![],
            Not(a) | X(a) | F(a) | G(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | U(a, b) | R(a, b) | W(a, b) | M(a, b) => vec![a, b],
        }
    }
}

/// Subformulas in post-order, children referenced by index.
pub struct Oracle {
    nodes: Vec<(Ltl, Vec<usize>)>,
}

impl Oracle {
    pub fn new(f: &Ltl) -> Oracle {
        let mut o = Oracle { nodes: Vec::new() };
        o.add(f);
        o
    }

    fn add(&mut self, f: &Ltl) -> usize {
        let kids: Vec<usize> = f.children().into_iter().map(|c| self.add(c)).collect();
        self.nodes.push((f.clone(), kids));
        self.nodes.len() - 1
    }

    /// Value of node `k` at a position, given the values of the children
    /// there and the values at the next position.
    fn local(&self, k: usize, letter: u32, here: &[bool], next: &[bool]) -> bool {
        use Ltl::*;
        let (f, c) = &self.nodes[k];
        let a = |i: usize| here[c[i]];
        match f {
            True => true,
            False => false,
            Ap(p) => letter >> p & 1 == 1,
            Not(_) => !a(0),
            And(..) => a(0) && a(1),
            Or(..) => a(0) || a(1),
            Implies(..) => !a(0) || a(1),
            Iff(..) => a(0) == a(1),
            X(_) => next[c[0]],
            F(_) => a(0) || next[k],
            G(_) => a(0) && next[k],
            U(..) => a(1) || (a(0) && next[k]),
            R(..) => a(1) && (a(0) || next[k]),
            W(..) => a(1) || (a(0) && next[k]),
            M(..) => a(1) && (a(0) || next[k]),
        }
    }

    fn greatest(&self, k: usize) -> bool {
        matches!(self.nodes[k].0, Ltl::G(_) | Ltl::R(..) | Ltl::W(..))
    }

    /// Values of all subformulas at the start of `loop_^ω`. Fixpoint
    /// operators are iterated from their extremal value (false for least,
    /// true for greatest) until stable.
    pub fn loop_values(&self, loop_: &[u32]) -> Vec<bool> {
        let n = loop_.len();
        let m = self.nodes.len();
        let mut val = vec![vec![false; m]; n];
        for k in 0..m {
            let init = self.greatest(k);
            for row in val.iter_mut() {
                row[k] = init;
            }
            // Subformulas below k are final; iterate k over the loop.
            for _ in 0..=n + 1 {
                for i in (0..n).rev() {
                    let next = val[(i + 1) % n].clone();
                    let v = self.local(k, loop_[i], &val[i], &next);
                    val[i][k] = v;
                }
            }
        }
        val.swap_remove(0)
    }

    /// Values at `letter · w` from the values at `w`.
    pub fn prepend(&self, letter: u32, next: &[bool]) -> Vec<bool> {
        let mut here = vec![false; self.nodes.len()];
        for k in 0..self.nodes.len() {
            here[k] = self.local(k, letter, &here, next);
        }
        here
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Does `prefix · loop_^ω` satisfy the formula?
    pub fn holds(&self, prefix: &[u32], loop_: &[u32]) -> bool {
        let mut v = self.loop_values(loop_);
        for &a in prefix.iter().rev() {
            v = self.prepend(a, &v);
        }
        v[self.root()]
    }
}

pub fn random_formula(rng: &mut impl Rng, aps: usize, depth: usize) -> Ltl {
    use Ltl::*;
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => True,
            1 => False,
            _ => Ap(rng.gen_range(0..aps)),
        };
    }
    let op = rng.gen_range(0..14);
    let mut sub = || Box::new(random_formula(rng, aps, depth - 1));
    match op {
        0 => Not(sub()),
        1 => And(sub(), sub()),
        2 => Or(sub(), sub()),
        3 => Implies(sub(), sub()),
        4 => Iff(sub(), sub()),
        5 => X(sub()),
        6 => F(sub()),
        7 => G(sub()),
        8 => U(sub(), sub()),
        9 => R(sub(), sub()),
        10 => W(sub(), sub()),
        11 => M(sub(), sub()),
        12 => G(Box::new(F(sub()))),
        _ => F(Box::new(G(sub()))),
    }
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("p{k}")).collect()
}

/// Automaton for `f` over `aps` propositions (the first one an input), or
/// `None` if the formula is outside the supported fragment.
pub fn automaton(f: &Ltl, aps: usize) -> Option<Dpa> {
    let ns = names(aps);
    let ab = Alphabet::new(&ns[..1], &ns[1..]).unwrap();
    let parsed = parse(&f.render(&ns), &ab).unwrap();
    build(&annotate(&parsed), &ab, BuildOptions::default()).ok()
}

/// Explicit transition table of the part of `dpa` reachable from its
/// initial state (state 0), or `None` beyond `limit` states.
pub struct Table {
    pub next: Vec<Vec<(usize, u32)>>,
    pub parity: u32,
}

impl Table {
    pub fn new(dpa: &Dpa, letters: u32, limit: usize) -> Option<Table> {
        let mut index: HashMap<ProductState, usize> = HashMap::new();
        let mut order = vec![dpa.initial()];
        index.insert(order[0].clone(), 0);
        let mut next = Vec::new();
        let mut k = 0;
        while k < order.len() {
            if order.len() > limit {
                return None;
            }
            let q = order[k].clone();
            k += 1;
            let row = (0..letters)
                .map(|a| {
                    let (q2, c) = dpa.step(&q, a);
                    let id = *index.entry(q2.clone()).or_insert_with(|| {
                        order.push(q2);
                        order.len() - 1
                    });
                    (id, c)
                })
                .collect();
            next.push(row);
        }
        Some(Table { next, parity: dpa.parity() })
    }

    pub fn run(&self, mut q: usize, word: &[u32]) -> usize {
        for &a in word {
            q = self.next[q][a as usize].0;
        }
        q
    }

    /// Acceptance of `loop_^ω` from state `q`.
    pub fn accepts_loop(&self, q: usize, loop_: &[u32]) -> bool {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut colours = Vec::new();
        let (mut q, mut k) = (q, 0);
        loop {
            let pos = k % loop_.len();
            if let Some(&s) = seen.get(&(q, pos)) {
                return colours[s..].iter().min().unwrap() % 2 == self.parity % 2;
            }
            seen.insert((q, pos), k);
            let (q2, c) = self.next[q][loop_[pos] as usize];
            colours.push(c);
            q = q2;
            k += 1;
        }
    }
}

/// All words of length `len` over `letters` letters, as base-`letters` digits.
pub fn words(letters: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.iter().flat_map(|w| (0..letters).map(move |a| [w.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Compares the automaton with the oracle on every lasso with prefix and
/// loop of length at most `max` (loop nonempty). Loops are grouped by their
/// behaviour on both sides, so each group is checked against every prefix
/// once. Returns the number of lasso words covered, or the first mismatch.
pub fn compare_all_lassos(f: &Ltl, table: &Table, letters: u32, max: usize) -> Result<u64, (Vec<u32>, Vec<u32>)> {
    let oracle = Oracle::new(f);
    let prefixes: Vec<Vec<u32>> = (0..=max).flat_map(|n| words(letters, n)).collect();
    let starts: Vec<usize> = prefixes.iter().map(|u| table.run(0, u)).collect();
    let mut distinct_starts: Vec<usize> = starts.clone();
    distinct_starts.sort_unstable();
    distinct_starts.dedup();
    let mut groups: HashSet<(Vec<bool>, Vec<bool>)> = HashSet::new();
    let mut count = 0u64;
    for n in 1..=max {
        for v in words(letters, n) {
            count += prefixes.len() as u64;
            let accept: Vec<bool> = distinct_starts.iter().map(|&q| table.accepts_loop(q, &v)).collect();
            let values = oracle.loop_values(&v);
            if !groups.insert((accept.clone(), values.clone())) {
                continue;
            }
            // Values at every prefix, built by prepending letters.
            for (u, &q) in prefixes.iter().zip(&starts) {
                let mut val = values.clone();
                for &a in u.iter().rev() {
                    val = oracle.prepend(a, &val);
                }
                let s = distinct_starts.binary_search(&q).unwrap();
                if val[oracle.root()] != accept[s] {
                    return Err((u.clone(), v.clone()));
                }
            }
        }
    }
    Ok(count)
}

/// Random total game whose edges all carry colours.
pub fn random_game(rng: &mut impl Rng, n: usize, colours: usize) -> Game {
    let mut g = Game::new(colours);
    for _ in 0..n {
        g.add_node(if rng.gen_bool(0.5) { Player::Controller } else { Player::Environment });
    }
    for v in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            let t = rng.gen_range(0..n);
            let c = rng.gen_range(0..colours as u32);
            g.add_edge(v, t, Some(c));
        }
    }
    g
}

/// The subgame of `full` explored so far: expanded nodes keep their edges,
/// discovered ones are boundary nodes.
pub fn partial(full: &Game, expanded: &[bool]) -> Game {
    let mut g = Game::new(full.colours);
    for (v, &open) in expanded.iter().enumerate() {
        g.add_node(full.owner[v]);
        if open {
            g.edges[v] = full.edges[v].clone();
        } else {
            g.fixed[v] = Some(Fixed::Boundary);
        }
    }
    g
}

/// Strict ASCII AIGER checker, written independently of the library reader:
/// exact header, canonical variable numbering, reset-0 latches, defined and
/// acyclic and-gates with `lhs > rhs0 >= rhs1`, well-formed symbol table.
pub fn check_aiger(text: &str) -> Result<(), String> {
    let lines: Vec<&str> = text.split_terminator('\n').collect();
    let nums = |s: &str| -> Result<Vec<u64>, String> {
        s.split(' ')
            .map(|t| {
                if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
                    Err(format!("bad number `{t}`"))
                } else {
                    t.parse().map_err(|e| format!("{e}"))
                }
            })
            .collect()
    };
    let header = lines.first().ok_or("empty")?;
    let h = nums(header.strip_prefix("aag ").ok_or("bad header")?)?;
    if h.len() != 5 {
        return Err("header needs five numbers".into());
    }
    let (m, i, l, o, a) = (h[0], h[1], h[2], h[3], h[4]);
    if m != i + l + a {
        return Err(format!("M = {m} but I + L + A = {}", i + l + a));
    }
    let body = 1 + (i + l + o + a) as usize;
    if lines.len() < body {
        return Err("truncated body".into());
    }
    let max_lit = 2 * m + 1;
    for k in 0..i {
        let v = nums(lines[1 + k as usize])?;
        if v != [2 * (k + 1)] {
            return Err(format!("input {k} is not {}", 2 * (k + 1)));
        }
    }
    let mut defined: HashSet<u64> = (0..=i + l).collect();
    for k in 0..l {
        let v = nums(lines[(1 + i + k) as usize])?;
        if v.len() != 2 || v[0] != 2 * (i + k + 1) || v[1] > max_lit {
            return Err(format!("bad latch line {k}"));
        }
    }
    for k in 0..o {
        let v = nums(lines[(1 + i + l + k) as usize])?;
        if v.len() != 1 || v[0] > max_lit {
            return Err(format!("bad output line {k}"));
        }
    }
    for k in 0..a {
        let v = nums(lines[(1 + i + l + o + k) as usize])?;
        let lhs = 2 * (i + l + k + 1);
        if v.len() != 3 || v[0] != lhs || !(v[0] > v[1] && v[1] >= v[2]) {
            return Err(format!("bad and-gate line {k}: {:?}", v));
        }
        if !defined.contains(&(v[1] / 2)) || !defined.contains(&(v[2] / 2)) {
            return Err(format!("and-gate {k} uses an undefined or later variable"));
        }
        defined.insert(lhs / 2);
    }
    // Latch and output literals must refer to defined variables.
    for line in &lines[(1 + i) as usize..(1 + i + l + o) as usize] {
        let v = nums(line)?;
        if !defined.contains(&(v[v.len() - 1] / 2)) {
            return Err(format!("undefined literal in `{line}`"));
        }
    }
    let mut seen = HashSet::new();
    let mut k = body;
    while k < lines.len() {
        let s = lines[k];
        if s == "c" {
            break;
        }
        let (kind, rest) = s.split_at(1);
        let (pos, name) = rest.split_once(' ').ok_or(format!("bad symbol `{s}`"))?;
        let pos = nums(pos)?[0];
        let bound = match kind {
            "i" => i,
            "l" => l,
            "o" => o,
            _ => return Err(format!("bad symbol kind in `{s}`")),
        };
        if pos >= bound || name.is_empty() || !seen.insert((kind.to_string(), pos)) {
            return Err(format!("bad symbol `{s}`"));
        }
        k += 1;
    }
    Ok(())
}

pub struct Spec {
    pub name: &'static str,
    pub ins: Vec<String>,
    pub outs: Vec<String>,
    pub formula: String,
    pub realizable: bool,
}

fn spec(name: &'static str, ins: &[&str], outs: &[&str], formula: &str, realizable: bool) -> Spec {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
    Spec { name, ins: s(ins), outs: s(outs), formula: formula.into(), realizable }
}

/// Arbiter for `n` clients: mutual exclusion and eventual grants.
pub fn arbiter(n: usize) -> Spec {
    let mut parts = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            parts.push(format!("G (!g{a} | !g{b})"));
        }
    }
    for a in 1..=n {
        parts.push(format!("G (r{a} -> F g{a})"));
    }
    let ins: Vec<String> = (1..=n).map(|k| format!("r{k}")).collect();
    let outs: Vec<String> = (1..=n).map(|k| format!("g{k}")).collect();
    let name = ["arbiter1", "arbiter1", "arbiter2", "arbiter3", "arbiter4"][n.min(4)];
    Spec { name, ins, outs, formula: parts.join(" & "), realizable: true }
}

/// Twenty specifications: arbiters, detectors, load balancers, and small
/// realizable and unrealizable specs.
pub fn corpus() -> Vec<Spec> {
    vec![
        arbiter(2),
        arbiter(3),
        arbiter(4),
        spec("detector", &["r"], &["g"], "G F r <-> G F g", true),
        spec("detector2", &["r1", "r2"], &["g"], "(G F r1 & G F r2) <-> G F g", true),
        spec("stable_detector", &["r"], &["g"], "F G r <-> F G g", true),
        spec("balancer", &["r"], &["g0", "g1"], "G (!g0 | !g1) & (G F r -> (G F g0 & G F g1))", true),
        spec("balancer_idle", &["r"], &["g0", "g1"], "G (r -> X (g0 | g1)) & G (!g0 | !g1)", true),
        spec("balancer_pair", &["r1", "r2"], &["g1", "g2"], "G ((r1 | r2) -> F (g1 | g2)) & G !(g1 & g2)", true),
        spec("copy", &["r"], &["g"], "G (r <-> X g)", true),
        spec("delay2", &["r"], &["g"], "G (r -> X X g)", true),
        spec("mirror", &["r"], &["g"], "G (g <-> r)", true),
        spec("alternate", &["r"], &["g"], "G (g -> X !g) & G F g", true),
        spec("guarded", &["r"], &["g"], "G (r -> F g) & G (g -> X !g)", true),
        spec("predict", &["r"], &["g"], "G (g <-> X r)", false),
        spec("contradiction", &[], &["g"], "G g & F !g", false),
        spec("env_liveness", &["r"], &["g"], "G F r", false),
        spec("conflict", &["r"], &["g"], "G (r -> g) & G (r -> !g)", false),
        spec("blocked", &["r"], &["g"], "G F g & G (r -> !g)", false),
        spec("closed", &[], &["g"], "G F g & G F !g", true),
    ]
}

pub fn alphabet(s: &Spec) -> Alphabet {
    Alphabet::new(&s.ins, &s.outs).unwrap()
}

/// Circuit outputs lie in the machine's output terms and the latches hold
/// the (normalised) code of the machine state, for every input word of
/// length at most `len`. Deterministic runs make the reachable (state,
/// latches) pairs per depth an exhaustive cover of those words.
pub fn faithful(m: &MealyMachine, enc: &StateEncoding, c: &Circuit, len: usize) -> bool {
    let enc = enc.normalised();
    let mut frontier = vec![(0usize, vec![false; c.latches.len()])];
    for _ in 0..len {
        let mut next = Vec::new();
        for (q, latches) in &frontier {
            let code: u64 = latches.iter().enumerate().map(|(k, &b)| (b as u64) << k).sum();
            if code != enc.codes[*q] {
                return false;
            }
            for i in 0..(1u32 << m.num_inputs()) {
                let (o, l2) = c.step(latches, i);
                if !m.output(*q, i).contains(o) {
                    return false;
                }
                next.push((m.next(*q, i), l2));
            }
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    true
}
