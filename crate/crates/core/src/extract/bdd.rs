//! Reduced ordered binary decision diagrams with a fixed variable order
//! (lower index nearer the root).

use std::collections::{HashMap, HashSet};

pub type Ref = u32;

const LEAF: u32 = u32::MAX;

#[derive(Default)]
pub struct Bdd {
    /// (variable, low, high); entries 0 and 1 are the constants.
    nodes: Vec<(u32, Ref, Ref)>,
    unique: HashMap<(u32, Ref, Ref), Ref>,
    ite_memo: HashMap<(Ref, Ref, Ref), Ref>,
}

impl Bdd {
    pub const FALSE: Ref = 0;
    pub const TRUE: Ref = 1;

    pub fn new() -> Bdd {
        Bdd { nodes: vec![(LEAF, 0, 0), (LEAF, 1, 1)], ..Default::default() }
    }

    pub fn var_of(&self, f: Ref) -> u32 {
        self.nodes[f as usize].0
    }

    pub fn low(&self, f: Ref) -> Ref {
        self.nodes[f as usize].1
    }

    pub fn high(&self, f: Ref) -> Ref {
        self.nodes[f as usize].2
    }

    pub fn is_const(&self, f: Ref) -> bool {
        f <= 1
    }

    pub fn mk(&mut self, var: u32, lo: Ref, hi: Ref) -> Ref {
        if lo == hi {
            return lo;
        }
        if let Some(&r) = self.unique.get(&(var, lo, hi)) {
            return r;
        }
        let r = self.nodes.len() as Ref;
        self.nodes.push((var, lo, hi));
        self.unique.insert((var, lo, hi), r);
        r
    }

    pub fn var(&mut self, v: u32) -> Ref {
        self.mk(v, Self::FALSE, Self::TRUE)
    }

    /// Literal: `v` if `positive`, else its negation.
    pub fn lit(&mut self, v: u32, positive: bool) -> Ref {
        if positive {
            self.mk(v, Self::FALSE, Self::TRUE)
        } else {
            self.mk(v, Self::TRUE, Self::FALSE)
        }
    }

    fn cofactors(&self, f: Ref, v: u32) -> (Ref, Ref) {
        let (fv, lo, hi) = self.nodes[f as usize];
        if fv == v {
            (lo, hi)
        } else {
            (f, f)
        }
    }

    pub fn ite(&mut self, f: Ref, g: Ref, h: Ref) -> Ref {
        if f == Self::TRUE {
            return g;
        }
        if f == Self::FALSE {
            return h;
        }
        if g == h {
            return g;
        }
        if g == Self::TRUE && h == Self::FALSE {
            return f;
        }
        if let Some(&r) = self.ite_memo.get(&(f, g, h)) {
            return r;
        }
        let v = self.var_of(f).min(self.var_of(g)).min(self.var_of(h));
        let (f0, f1) = self.cofactors(f, v);
        let (g0, g1) = self.cofactors(g, v);
        let (h0, h1) = self.cofactors(h, v);
        let lo = self.ite(f0, g0, h0);
        let hi = self.ite(f1, g1, h1);
        let r = self.mk(v, lo, hi);
        self.ite_memo.insert((f, g, h), r);
        r
    }

    pub fn not(&mut self, f: Ref) -> Ref {
        self.ite(f, Self::FALSE, Self::TRUE)
    }

    pub fn and(&mut self, f: Ref, g: Ref) -> Ref {
        self.ite(f, g, Self::FALSE)
    }

    pub fn or(&mut self, f: Ref, g: Ref) -> Ref {
        self.ite(f, Self::TRUE, g)
    }

    /// Function of variables `first..first + n` given by its truth table;
    /// bit `k` of the table index is variable `first + k`.
    pub fn from_table(&mut self, first: u32, n: usize, table: &[bool]) -> Ref {
        assert_eq!(table.len(), 1 << n);
        self.table_rec(first, n, 0, 0, table)
    }

    fn table_rec(&mut self, first: u32, n: usize, k: usize, idx: usize, table: &[bool]) -> Ref {
        if k == n {
            return if table[idx] { Self::TRUE } else { Self::FALSE };
        }
        let lo = self.table_rec(first, n, k + 1, idx, table);
        let hi = self.table_rec(first, n, k + 1, idx | 1 << k, table);
        self.mk(first + k as u32, lo, hi)
    }

    /// Conjunction of literals fixing variables `first..first + n` to the bits of `code`.
    pub fn minterm(&mut self, first: u32, n: usize, code: u64) -> Ref {
        let mut r = Self::TRUE;
        for k in (0..n).rev() {
            let v = first + k as u32;
            r = if code >> k & 1 == 1 { self.mk(v, Self::FALSE, r) } else { self.mk(v, r, Self::FALSE) };
        }
        r
    }

    /// Some function agreeing with `f` wherever `care` holds, obtained by
    /// replacing a branch with its sibling when the care set excludes it.
    pub fn restrict(&mut self, f: Ref, care: Ref) -> Ref {
        let mut memo = HashMap::new();
        self.restrict_rec(f, care, &mut memo)
    }

    fn restrict_rec(&mut self, f: Ref, c: Ref, memo: &mut HashMap<(Ref, Ref), Ref>) -> Ref {
        if c == Self::FALSE {
            return Self::FALSE;
        }
        if c == Self::TRUE || self.is_const(f) {
            return f;
        }
        if let Some(&r) = memo.get(&(f, c)) {
            return r;
        }
        let v = self.var_of(f).min(self.var_of(c));
        let (c0, c1) = self.cofactors(c, v);
        let (f0, f1) = self.cofactors(f, v);
        let r = if c0 == Self::FALSE {
            self.restrict_rec(f1, c1, memo)
        } else if c1 == Self::FALSE {
            self.restrict_rec(f0, c0, memo)
        } else if self.var_of(f) != v {
            let c = self.or(c0, c1);
            self.restrict_rec(f, c, memo)
        } else {
            let lo = self.restrict_rec(f0, c0, memo);
            let hi = self.restrict_rec(f1, c1, memo);
            self.mk(v, lo, hi)
        };
        memo.insert((f, c), r);
        r
    }

    /// Number of internal nodes reachable from any of `roots`.
    pub fn size(&self, roots: &[Ref]) -> usize {
        let mut seen = HashSet::new();
        let mut stack: Vec<Ref> = roots.to_vec();
        while let Some(f) = stack.pop() {
            if self.is_const(f) || !seen.insert(f) {
                continue;
            }
            stack.push(self.low(f));
            stack.push(self.high(f));
        }
        seen.len()
    }

    /// Value under an assignment, given as a predicate on variables.
    pub fn eval(&self, mut f: Ref, assignment: impl Fn(u32) -> bool) -> bool {
        while !self.is_const(f) {
            f = if assignment(self.var_of(f)) { self.high(f) } else { self.low(f) };
        }
        f == Self::TRUE
    }
}
