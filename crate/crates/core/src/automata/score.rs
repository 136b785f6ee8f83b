use super::{round_robin, Dpa, Kind, Node, Plan, ProductState};
use crate::ltl::{AcceptanceType, BoolOp, Formula, Letter};

/// Variables above this count are scored by assuming independence.
const EXACT_VARS: usize = 16;

/// Fraction of assignments to the atoms of `f` (propositions and temporal
/// subformulas) that satisfy its Boolean structure.
pub fn sat_fraction(f: &Formula) -> f64 {
    let mut atoms: Vec<Formula> = Vec::new();
    collect_atoms(f, &mut atoms);
    atoms.sort();
    atoms.dedup();
    if atoms.len() > EXACT_VARS {
        return independent(f);
    }
    let n = atoms.len();
    let mut count = 0u64;
    for bits in 0u32..(1 << n) {
        let lookup = |g: &Formula| -> bool {
            let i = atoms.binary_search(g).expect("atom");
            bits >> i & 1 == 1
        };
        if eval(f, &lookup) {
            count += 1;
        }
    }
    count as f64 / (1u64 << n) as f64
}

/// Literals are keyed by their positive form.
fn atom_key(f: &Formula) -> Formula {
    match f {
        Formula::Lit(a, _) => Formula::Lit(*a, true),
        g => g.clone(),
    }
}

fn collect_atoms(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| collect_atoms(c, out)),
        Formula::Iff(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        g => out.push(atom_key(g)),
    }
}

fn eval(f: &Formula, lookup: &impl Fn(&Formula) -> bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lit(_, pos) => lookup(&atom_key(f)) == *pos,
        Formula::And(cs) => cs.iter().all(|c| eval(c, lookup)),
        Formula::Or(cs) => cs.iter().any(|c| eval(c, lookup)),
        Formula::Iff(a, b) => eval(a, lookup) == eval(b, lookup),
        g => lookup(g),
    }
}

fn independent(f: &Formula) -> f64 {
    match f {
        Formula::True => 1.0,
        Formula::False => 0.0,
        Formula::And(cs) => cs.iter().map(independent).product(),
        Formula::Or(cs) => 1.0 - cs.iter().map(|c| 1.0 - independent(c)).product::<f64>(),
        Formula::Iff(a, b) => {
            let (x, y) = (independent(a), independent(b));
            x * y + (1.0 - x) * (1.0 - y)
        }
        _ => 0.5,
    }
}

/// Keep non-sink scores strictly inside (0, 1).
fn interior(s: f64) -> f64 {
    s.clamp(1e-3, 1.0 - 1e-3)
}

fn log_half(x: f64) -> f64 {
    -x.log2()
}

impl Dpa {
    /// Quality score in [0, 1] of the transition from `q` on `letter`:
    /// 0 for transitions into ⊥, 1 into ⊤, strictly in between otherwise.
    pub fn score(&self, q: &ProductState, letter: Letter) -> f64 {
        let (next, _) = self.step(q, letter);
        self.score_node(self.root(), q, letter, &next).1
    }

    /// Weighted score (w, s) of the transition `q --letter--> next` in `node`.
    pub fn weighted_score(&self, q: &ProductState, letter: Letter) -> (f64, f64) {
        let (next, _) = self.step(q, letter);
        self.score_node(self.root(), q, letter, &next)
    }

    fn score_node(&self, node: &Node, q: &ProductState, letter: Letter, next: &ProductState) -> (f64, f64) {
        match next {
            ProductState::Bot => return (1.0, 0.0),
            ProductState::Top => return (1.0, 1.0),
            _ => {}
        }
        match (&node.kind, next) {
            (Kind::WeakLeaf { .. }, ProductState::Weak(f)) => (1.0, interior(sat_fraction(f))),
            (Kind::BuchiLeaf { complement, .. }, ProductState::Buchi { current, next }) => {
                let s = sat_fraction(&Formula::and(current.clone(), next.clone()));
                (1.0, interior(if *complement { 1.0 - s } else { s }))
            }
            (kind, ProductState::Node { children: nexts, .. }) => {
                let ProductState::Node { children: qs, mem } = q else { unreachable!("composite source") };
                let children = node.children();
                let colours: Vec<u32> = children.iter().zip(qs).map(|(c, s)| self.step_node(c, s, letter).1).collect();
                let mut ws: Vec<(f64, f64)> =
                    children.iter().zip(qs).zip(nexts).map(|((c, s), n)| self.score_node(c, s, letter, n)).collect();
                let op = match kind {
                    Kind::Weak { op, .. } => *op,
                    Kind::Junction { conj: true, .. } => BoolOp::And,
                    Kind::Junction { conj: false, .. } => BoolOp::Or,
                    _ => BoolOp::Iff,
                };
                for (w, s) in ws.iter_mut() {
                    if *s > 0.0 && *s < 1.0 {
                        *w *= match op {
                            BoolOp::And => log_half(*s),
                            BoolOp::Or => log_half(1.0 - *s),
                            BoolOp::Iff => log_half(*s).max(log_half(1.0 - *s)),
                        };
                    }
                }
                let memory_bonus = |ws: &mut Vec<(f64, f64)>, i: usize, c: u32, c2: u32| {
                    if c2 < c {
                        let (w, s) = &mut ws[i];
                        *w *= 2.0;
                        *s = if c2 % 2 == node.p { (3.0 + *s) / 4.0 } else { *s / 4.0 };
                    }
                };
                match kind {
                    Kind::Junction { plan: Plan::RoundRobin, children, .. } => {
                        let r2 = round_robin(*mem, &colours);
                        for i in (*mem as usize)..(r2 as usize) {
                            let (w, s) = &mut ws[i];
                            *w *= 2.0;
                            *s = if children[i].ty == AcceptanceType::CoBuchi { *s / 4.0 } else { (3.0 + *s) / 4.0 };
                        }
                    }
                    Kind::Junction { plan: Plan::Memory { other, shift, .. }, .. } => {
                        let c2 = (*mem).min(colours[*other] + shift);
                        memory_bonus(&mut ws, *other, *mem, c2);
                    }
                    Kind::Iff { first, .. } => {
                        let second = 1 - first;
                        let c2 = (*mem).min(colours[second]);
                        memory_bonus(&mut ws, second, *mem, c2);
                    }
                    _ => {}
                }
                let w: f64 = ws.iter().map(|x| x.0).sum();
                let s: f64 = ws.iter().map(|x| x.0 * x.1).sum::<f64>() / w;
                (w, interior(s))
            }
            _ => unreachable!("state shape mismatch"),
        }
    }
}
