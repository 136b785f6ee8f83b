use super::Formula;
use std::fmt;

/// Acceptance type of a (sub)formula: weak, Büchi, co-Büchi or parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AcceptanceType {
    Weak,
    Buchi,
    CoBuchi,
    Parity,
}

impl AcceptanceType {
    /// Least upper bound: W below B and C, both below P, B and C incomparable.
    pub fn lub(self, other: AcceptanceType) -> AcceptanceType {
        use AcceptanceType::*;
        match (self, other) {
            (x, y) if x == y => x,
            (Weak, y) => y,
            (x, Weak) => x,
            _ => Parity,
        }
    }

    /// Partial order: `self ⪯ other`.
    pub fn le(self, other: AcceptanceType) -> bool {
        self.lub(other) == other
    }

    /// The type of the complemented automaton.
    pub fn dual(self) -> AcceptanceType {
        match self {
            AcceptanceType::Buchi => AcceptanceType::CoBuchi,
            AcceptanceType::CoBuchi => AcceptanceType::Buchi,
            t => t,
        }
    }
}

impl fmt::Display for AcceptanceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AcceptanceType::Weak => "W",
            AcceptanceType::Buchi => "B",
            AcceptanceType::CoBuchi => "C",
            AcceptanceType::Parity => "P",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    Iff,
}

/// A formula tree annotated with acceptance types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Annotated {
    Leaf { ty: AcceptanceType, formula: Formula },
    Node { ty: AcceptanceType, op: BoolOp, children: Vec<Annotated> },
}

impl Annotated {
    pub fn ty(&self) -> AcceptanceType {
        match self {
            Annotated::Leaf { ty, .. } | Annotated::Node { ty, .. } => *ty,
        }
    }

    /// Rebuild the plain formula (with the original nesting of junctions
    /// replaced by the annotation's grouping).
    pub fn erase(&self) -> Formula {
        match self {
            Annotated::Leaf { formula, .. } => formula.clone(),
            Annotated::Node { op, children, .. } => {
                let cs: Vec<Formula> = children.iter().map(|c| c.erase()).collect();
                match op {
                    BoolOp::And => Formula::And(cs),
                    BoolOp::Or => Formula::Or(cs),
                    BoolOp::Iff => {
                        let mut it = cs.into_iter();
                        Formula::iff(it.next().unwrap(), it.next().unwrap())
                    }
                }
            }
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<(&Formula, AcceptanceType)> {
        let mut out = Vec::new();
        fn walk<'a>(a: &'a Annotated, out: &mut Vec<(&'a Formula, AcceptanceType)>) {
            match a {
                Annotated::Leaf { ty, formula } => out.push((formula, *ty)),
                Annotated::Node { children, .. } => children.iter().for_each(|c| walk(c, out)),
            }
        }
        walk(self, &mut out);
        out
    }
}

/// Formula built only from constants, literals, `&`, `|`, `X` and `U`.
pub fn in_mu(f: &Formula) -> bool {
    fragment(f, true)
}

/// Formula built only from constants, literals, `&`, `|`, `X` and `R`.
pub fn in_nu(f: &Formula) -> bool {
    fragment(f, false)
}

fn fragment(f: &Formula, mu: bool) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Lit(..) => true,
        Formula::And(cs) | Formula::Or(cs) => cs.iter().all(|c| fragment(c, mu)),
        Formula::Next(a) => fragment(a, mu),
        Formula::Until(a, b) => mu && fragment(a, mu) && fragment(b, mu),
        Formula::Release(a, b) => !mu && fragment(a, mu) && fragment(b, mu),
        Formula::Iff(..) => false,
    }
}

/// `G ψ` with ψ in the until-fragment.
pub fn in_g_mu(f: &Formula) -> bool {
    matches!(f, Formula::Release(a, b) if **a == Formula::False && in_mu(b))
}

/// `F ψ` with ψ in the release-fragment.
pub fn in_f_nu(f: &Formula) -> bool {
    matches!(f, Formula::Until(a, b) if **a == Formula::True && in_nu(b))
}

/// Split an n-ary junction into its first child and the (right-nested) rest.
fn split(cs: &[Formula], conj: bool) -> (Formula, Formula) {
    let rest = if cs.len() == 2 {
        cs[1].clone()
    } else if conj {
        Formula::And(cs[1..].to_vec())
    } else {
        Formula::Or(cs[1..].to_vec())
    };
    (cs[0].clone(), rest)
}

/// The acceptance type of a formula, determined syntactically.
pub fn classify(f: &Formula) -> AcceptanceType {
    match f {
        Formula::And(cs) | Formula::Or(cs) if cs.len() >= 2 => {
            cs.iter().map(classify).fold(AcceptanceType::Weak, AcceptanceType::lub)
        }
        Formula::And(cs) | Formula::Or(cs) if cs.len() == 1 => classify(&cs[0]),
        _ if in_mu(f) || in_nu(f) => AcceptanceType::Weak,
        Formula::Iff(a, b) if classify(a) == AcceptanceType::Weak && classify(b) == AcceptanceType::Weak => {
            AcceptanceType::Weak
        }
        _ if in_g_mu(f) => AcceptanceType::Buchi,
        _ if in_f_nu(f) => AcceptanceType::CoBuchi,
        _ => AcceptanceType::Parity,
    }
}

/// Annotate a formula with acceptance types. Junctions whose children are
/// not both of parity type become composite nodes; nested Büchi
/// conjunctions (co-Büchi disjunctions) with only Büchi (co-Büchi) children
/// are merged into one n-ary node.
pub fn annotate(f: &Formula) -> Annotated {
    let ty = classify(f);
    let (op, l, r) = match f {
        Formula::And(cs) if cs.len() == 1 => return annotate(&cs[0]),
        Formula::Or(cs) if cs.len() == 1 => return annotate(&cs[0]),
        Formula::And(cs) if cs.len() >= 2 => {
            let (l, r) = split(cs, true);
            (BoolOp::And, l, r)
        }
        Formula::Or(cs) if cs.len() >= 2 => {
            let (l, r) = split(cs, false);
            (BoolOp::Or, l, r)
        }
        Formula::Iff(a, b) => (BoolOp::Iff, (**a).clone(), (**b).clone()),
        _ => return Annotated::Leaf { ty, formula: f.clone() },
    };
    if classify(&l) == AcceptanceType::Parity && classify(&r) == AcceptanceType::Parity {
        return Annotated::Leaf { ty, formula: f.clone() };
    }
    let children = vec![annotate(&l), annotate(&r)];
    let group = match (op, ty) {
        (BoolOp::And, AcceptanceType::Buchi) => Some(AcceptanceType::Buchi),
        (BoolOp::Or, AcceptanceType::CoBuchi) => Some(AcceptanceType::CoBuchi),
        _ => None,
    };
    let children = match group {
        Some(g) if children.iter().all(|c| c.ty() == g) => children
            .into_iter()
            .flat_map(|c| match c {
                Annotated::Node { op: cop, children: gc, .. } if cop == op && gc.iter().all(|x| x.ty() == g) => gc,
                c => vec![c],
            })
            .collect(),
        _ => children,
    };
    Annotated::Node { ty, op, children }
}
