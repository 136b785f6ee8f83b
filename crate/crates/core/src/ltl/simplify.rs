use super::Formula;
use std::collections::BTreeSet;

/// Negation of an NNF formula, again in NNF.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Lit(a, pos) => Formula::Lit(*a, !pos),
        Formula::And(cs) => Formula::Or(cs.iter().map(negate).collect()),
        Formula::Or(cs) => Formula::And(cs.iter().map(negate).collect()),
        Formula::Iff(a, b) => Formula::Iff(a.clone(), Box::new(negate(b))),
        Formula::Next(a) => Formula::next(negate(a)),
        Formula::Until(a, b) => Formula::release(negate(a), negate(b)),
        Formula::Release(a, b) => Formula::until(negate(a), negate(b)),
    }
}

/// Cheap propositional normal form: constant folding, flattening,
/// idempotence, absorption, complementary literals, and sorted children.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Lit(..) => f.clone(),
        Formula::And(cs) => junction(cs.iter().map(simplify).collect(), true),
        Formula::Or(cs) => junction(cs.iter().map(simplify).collect(), false),
        Formula::Iff(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Formula::True, _) => b,
                (_, Formula::True) => a,
                (Formula::False, _) => simplify(&negate(&b)),
                (_, Formula::False) => simplify(&negate(&a)),
                _ if a == b => Formula::True,
                _ if a == simplify(&negate(&b)) => Formula::False,
                _ if a <= b => Formula::iff(a, b),
                _ => Formula::iff(b, a),
            }
        }
        Formula::Next(a) => match simplify(a) {
            c @ (Formula::True | Formula::False) => c,
            a => Formula::next(a),
        },
        Formula::Until(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (_, Formula::True | Formula::False) => b,
                (Formula::False, _) => b,
                _ if a == b => b,
                _ => Formula::until(a, b),
            }
        }
        Formula::Release(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (_, Formula::True | Formula::False) => b,
                (Formula::True, _) => b,
                _ if a == b => b,
                _ => Formula::release(a, b),
            }
        }
    }
}

/// Children of `f` viewed as a conjunction (`conj`) or a disjunction.
fn parts(f: &Formula, conj: bool) -> &[Formula] {
    match (f, conj) {
        (Formula::And(cs), true) | (Formula::Or(cs), false) => cs,
        _ => std::slice::from_ref(f),
    }
}

fn is_subset(small: &[Formula], big: &[Formula]) -> bool {
    // Both are sorted.
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Build a simplified conjunction (`conj`) or disjunction of simplified children.
fn junction(children: Vec<Formula>, conj: bool) -> Formula {
    let (unit, zero) = if conj { (Formula::True, Formula::False) } else { (Formula::False, Formula::True) };
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        match c {
            Formula::And(cs) if conj => flat.extend(cs),
            Formula::Or(cs) if !conj => flat.extend(cs),
            c if c == unit => {}
            c if c == zero => return zero,
            c => flat.push(c),
        }
    }
    flat.sort();
    flat.dedup();
    for w in flat.windows(2) {
        if let (Formula::Lit(a, false), Formula::Lit(b, true)) = (&w[0], &w[1]) {
            if a == b {
                return zero;
            }
        }
    }
    // Absorption: a child of the opposite kind whose parts include all parts
    // of another child is redundant, e.g. a & (a | b) = a.
    let keep: Vec<bool> = (0..flat.len())
        .map(|i| {
            let pi = parts(&flat[i], !conj);
            !(0..flat.len())
                .any(|j| j != i && pi.len() > parts(&flat[j], !conj).len() && is_subset(parts(&flat[j], !conj), pi))
        })
        .collect();
    let mut flat: Vec<Formula> = flat.into_iter().zip(keep).filter(|(_, k)| *k).map(|(f, _)| f).collect();
    match flat.len() {
        0 => unit,
        1 => flat.pop().unwrap(),
        _ if conj => Formula::And(flat),
        _ => Formula::Or(flat),
    }
}

/// Limit on the number of terms of the disjunctive normal form computed by
/// [`canonical`]; larger formulas fall back to [`simplify`].
const DNF_LIMIT: usize = 512;

/// Canonical form of the Boolean structure above the temporal operators:
/// the minimal disjunctive normal form over temporal subformulas and
/// literals. Two formulas with the same canonical form are propositionally
/// equivalent; the converse holds modulo literal interactions.
pub fn canonical(f: &Formula) -> Formula {
    let s = simplify(f);
    if matches!(s, Formula::Iff(..)) || !has_junction_mix(&s) {
        return s;
    }
    match dnf(&s) {
        Some(terms) => {
            let disjuncts = terms.into_iter().map(|t| junction(t.into_iter().collect(), true)).collect();
            junction(disjuncts, false)
        }
        None => s,
    }
}

/// True if an `And` occurs directly below an `Or` somewhere in the Boolean
/// layer, i.e. the formula is not already a flat DNF.
fn has_junction_mix(f: &Formula) -> bool {
    match f {
        Formula::And(cs) => cs.iter().any(|c| matches!(c, Formula::Or(_))),
        Formula::Or(cs) => cs.iter().any(|c| match c {
            Formula::And(ds) => ds.iter().any(|d| matches!(d, Formula::Or(_))),
            _ => false,
        }),
        _ => false,
    }
}

type Term = BTreeSet<Formula>;

fn dnf(f: &Formula) -> Option<Vec<Term>> {
    let terms = match f {
        Formula::True => vec![Term::new()],
        Formula::False => vec![],
        Formula::Or(cs) => {
            let mut out = Vec::new();
            for c in cs {
                out.extend(dnf(c)?);
                if out.len() > DNF_LIMIT {
                    return None;
                }
            }
            out
        }
        Formula::And(cs) => {
            let mut acc = vec![Term::new()];
            for c in cs {
                let rhs = dnf(c)?;
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for a in &acc {
                    for b in &rhs {
                        let t: Term = a.union(b).cloned().collect();
                        if !contradictory(&t) {
                            next.push(t);
                        }
                    }
                }
                if next.len() > DNF_LIMIT {
                    return None;
                }
                acc = minimise(next);
            }
            acc
        }
        atom => vec![std::iter::once(atom.clone()).collect()],
    };
    Some(minimise(terms))
}

fn contradictory(t: &Term) -> bool {
    t.iter().any(|x| matches!(x, Formula::Lit(a, true) if t.contains(&Formula::Lit(*a, false))))
}

/// Drop duplicate and subsumed terms.
fn minimise(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    terms.dedup();
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        if !out.iter().any(|s| s.is_subset(&t)) {
            out.push(t);
        }
    }
    out
}
