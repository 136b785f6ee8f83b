//! On-the-fly deterministic parity automata for annotated formulas.
//!
//! Leaves are translated with formula derivatives; composite nodes combine
//! their children with product constructions chosen by acceptance type.

mod score;

use crate::cube::{cover, Cube};
use crate::ltl::{af, canonical, negate, simplify, AcceptanceType, Alphabet, Annotated, BoolOp, Formula, Letter};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;

/// State of a product automaton. The tree shape mirrors the annotated
/// formula except for the global sinks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductState {
    /// Rejecting sink.
    Bot,
    /// Accepting sink.
    Top,
    /// Weak leaf: the remaining obligation.
    Weak(Formula),
    /// Büchi / co-Büchi leaf: obligations of the tracked batch and of the
    /// instances started after it.
    Buchi { current: Formula, next: Formula },
    /// Composite node with a round-robin counter or colour memory (0 if unused).
    Node { children: Vec<ProductState>, mem: u32 },
}

impl ProductState {
    pub fn is_sink(&self) -> bool {
        matches!(self, ProductState::Bot | ProductState::Top)
    }

    /// Render with proposition names from `alphabet`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            ProductState::Bot => "⊥".into(),
            ProductState::Top => "⊤".into(),
            ProductState::Weak(f) => format!("[{}]", f.display(alphabet)),
            ProductState::Buchi { current, next } => {
                format!("[{} ; {}]", current.display(alphabet), next.display(alphabet))
            }
            ProductState::Node { children, mem } => {
                let cs: Vec<String> = children.iter().map(|c| c.render(alphabet)).collect();
                format!("({}, {})", cs.join(", "), mem)
            }
        }
    }
}

/// One transition cell: every letter `i ∪ o` with `i ∈ inputs`, `o ∈ outputs`
/// leads to `successor` with `colour`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub inputs: Vec<Cube>,
    pub outputs: Vec<Cube>,
    pub colour: u32,
    pub successor: ProductState,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("unsupported fragment: no construction for parity leaf `{0}`")]
    UnsupportedFragment(String),
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Cache transition groups per state.
    pub memoize: bool,
    /// Identify leaf states up to the disjunctive normal form of their
    /// Boolean structure, not only up to cheap rewriting.
    pub canonical_states: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { memoize: true, canonical_states: true }
    }
}

#[derive(Clone, Debug)]
enum Plan {
    /// Weak child filters the colours of the other one.
    WeakFilter { filter: usize, other: usize },
    /// Co-Büchi child (in the view) forces colour 0 when it rejects.
    CoBuchiFilter { filter: usize, other: usize, shift: u32 },
    /// All children Büchi (in the view): round-robin counter.
    RoundRobin,
    /// Büchi child and parity child: minimal colour memory.
    Memory { buchi: usize, other: usize, shift: u32, d2: u32 },
}

#[derive(Clone, Debug)]
enum Kind {
    WeakLeaf {
        formula: Formula,
        cosafety: bool,
    },
    /// `body` is the formula under `G`; for co-Büchi leaves it is the
    /// negated body of the `F` formula and the automaton is complemented.
    BuchiLeaf {
        body: Formula,
        complement: bool,
    },
    Weak {
        op: BoolOp,
        children: Vec<Node>,
    },
    Junction {
        conj: bool,
        children: Vec<Node>,
        plan: Plan,
    },
    Iff {
        children: Vec<Node>,
        first: usize,
        d2: u32,
    },
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    kind: Kind,
    ty: AcceptanceType,
    d: u32,
    p: u32,
}

impl Node {
    fn build(a: &Annotated) -> Result<Node, BuildError> {
        match a {
            Annotated::Leaf { ty, formula } => Node::leaf(*ty, formula),
            Annotated::Node { ty, op, children } => {
                let children: Vec<Node> = children.iter().map(Node::build).collect::<Result<_, _>>()?;
                if children.iter().all(|c| c.ty == AcceptanceType::Weak) {
                    return Ok(Node { kind: Kind::Weak { op: *op, children }, ty: AcceptanceType::Weak, d: 1, p: 0 });
                }
                match op {
                    BoolOp::And | BoolOp::Or => Ok(Node::junction(*ty, *op == BoolOp::And, children)),
                    BoolOp::Iff => Ok(Node::iff(*ty, children)),
                }
            }
        }
    }

    fn leaf(ty: AcceptanceType, formula: &Formula) -> Result<Node, BuildError> {
        let (kind, d, p) = match ty {
            AcceptanceType::Weak => {
                let cosafety = crate::ltl::in_mu(formula);
                (Kind::WeakLeaf { formula: formula.clone(), cosafety }, 1, 0)
            }
            AcceptanceType::Buchi => {
                let Formula::Release(_, body) = formula else { unreachable!("Büchi leaf is G ψ") };
                (Kind::BuchiLeaf { body: simplify(body), complement: false }, 1, 0)
            }
            AcceptanceType::CoBuchi => {
                let Formula::Until(_, body) = formula else { unreachable!("co-Büchi leaf is F ψ") };
                (Kind::BuchiLeaf { body: simplify(&negate(body)), complement: true }, 1, 1)
            }
            AcceptanceType::Parity => {
                return Err(BuildError::UnsupportedFragment(format!("{formula:?}")));
            }
        };
        Ok(Node { kind, ty, d, p })
    }

    fn junction(ty: AcceptanceType, conj: bool, children: Vec<Node>) -> Node {
        // Disjunctions are handled as conjunctions of the complements: the
        // view swaps Büchi/co-Büchi and flips parities, colours are unchanged.
        let vty = |c: &Node| if conj { c.ty } else { c.ty.dual() };
        let vp = |c: &Node| if conj { c.p } else { 1 - c.p };
        let find = |t: AcceptanceType| children.iter().position(|c| vty(c) == t);
        let (plan, d, view_p) = if let Some(f) = find(AcceptanceType::Weak) {
            assert_eq!(children.len(), 2);
            let o = 1 - f;
            (Plan::WeakFilter { filter: f, other: o }, children[o].d, vp(&children[o]))
        } else if let Some(f) = find(AcceptanceType::CoBuchi) {
            assert_eq!(children.len(), 2);
            let o = 1 - f;
            let shift = if vp(&children[o]) == 1 { 0 } else { 1 };
            (Plan::CoBuchiFilter { filter: f, other: o, shift }, children[o].d + shift, 1)
        } else if children.iter().all(|c| vty(c) == AcceptanceType::Buchi) {
            (Plan::RoundRobin, 1, 0)
        } else {
            assert_eq!(children.len(), 2);
            let b = find(AcceptanceType::Buchi).expect("Büchi child next to a parity child");
            let o = 1 - b;
            let shift = if vp(&children[o]) == 1 { 0 } else { 1 };
            let d2 = children[o].d + shift;
            let d = d2.next_multiple_of(2);
            (Plan::Memory { buchi: b, other: o, shift, d2 }, d, 1)
        };
        let p = if conj { view_p } else { 1 - view_p };
        Node { kind: Kind::Junction { conj, children, plan }, ty, d, p }
    }

    fn iff(ty: AcceptanceType, children: Vec<Node>) -> Node {
        assert_eq!(children.len(), 2);
        let first = children
            .iter()
            .position(|c| c.ty == AcceptanceType::Weak)
            .or_else(|| children.iter().position(|c| c.ty != AcceptanceType::Parity))
            .expect("at most one parity child");
        let second = 1 - first;
        let d2 = children[second].d;
        let d = d2 + 1;
        let p = (children[first].p + children[second].p) % 2;
        Node { kind: Kind::Iff { children, first, d2 }, ty, d, p }
    }

    fn children(&self) -> &[Node] {
        match &self.kind {
            Kind::Weak { children, .. } | Kind::Junction { children, .. } | Kind::Iff { children, .. } => children,
            _ => &[],
        }
    }
}

/// Layout of product states: leaves, and composite nodes with or without a
/// memory (round-robin counter or colour memory).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node { children: Vec<Shape>, memory: bool },
}

impl Node {
    fn shape(&self) -> Shape {
        match &self.kind {
            Kind::WeakLeaf { .. } | Kind::BuchiLeaf { .. } => Shape::Leaf,
            kind => {
                let memory = matches!(
                    kind,
                    Kind::Junction { plan: Plan::RoundRobin | Plan::Memory { .. }, .. } | Kind::Iff { .. }
                );
                Shape::Node { children: self.children().iter().map(Node::shape).collect(), memory }
            }
        }
    }
}

/// Combine child sinks: returns the sink the composite collapses to, if any.
fn sink_of(op: BoolOp, states: &[ProductState]) -> Option<ProductState> {
    use ProductState::{Bot, Top};
    match op {
        BoolOp::And => {
            if states.contains(&Bot) {
                Some(Bot)
            } else if states.iter().all(|s| *s == Top) {
                Some(Top)
            } else {
                None
            }
        }
        BoolOp::Or => {
            if states.contains(&Top) {
                Some(Top)
            } else if states.iter().all(|s| *s == Bot) {
                Some(Bot)
            } else {
                None
            }
        }
        BoolOp::Iff => {
            if states.iter().all(|s| s.is_sink()) {
                Some(if states[0] == states[1] { Top } else { Bot })
            } else {
                None
            }
        }
    }
}

/// Handle on the deterministic parity automaton of an annotated formula.
/// States are only constructed when queried.
pub struct Dpa {
    root: Node,
    alphabet: Alphabet,
    options: BuildOptions,
    memo: HashMap<ProductState, Rc<Vec<Cell>>>,
}

/// Build the automaton for `annotated`.
pub fn build(annotated: &Annotated, alphabet: &Alphabet, options: BuildOptions) -> Result<Dpa, BuildError> {
    let root = Node::build(annotated)?;
    Ok(Dpa { root, alphabet: alphabet.clone(), options, memo: HashMap::new() })
}

impl Dpa {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Maximal colour `d`.
    pub fn max_colour(&self) -> u32 {
        self.root.d
    }

    /// Parity `p`: a run is accepting iff its least recurring colour ≡ p (mod 2).
    pub fn parity(&self) -> u32 {
        self.root.p
    }

    pub fn initial(&self) -> ProductState {
        self.initial_of(&self.root)
    }

    fn canon(&self, f: &Formula) -> Formula {
        if self.options.canonical_states {
            canonical(f)
        } else {
            simplify(f)
        }
    }

    fn initial_of(&self, node: &Node) -> ProductState {
        match &node.kind {
            Kind::WeakLeaf { formula, .. } => match self.canon(formula) {
                Formula::True => ProductState::Top,
                Formula::False => ProductState::Bot,
                f => ProductState::Weak(f),
            },
            Kind::BuchiLeaf { body, complement } => {
                let s = match body {
                    Formula::False => ProductState::Bot,
                    Formula::True => ProductState::Top,
                    b => ProductState::Buchi { current: self.canon(b), next: Formula::True },
                };
                if *complement {
                    swap_sinks(s)
                } else {
                    s
                }
            }
            kind => {
                let children: Vec<ProductState> = node.children().iter().map(|c| self.initial_of(c)).collect();
                let op = match kind {
                    Kind::Weak { op, .. } => *op,
                    Kind::Junction { conj: true, .. } => BoolOp::And,
                    Kind::Junction { conj: false, .. } => BoolOp::Or,
                    _ => BoolOp::Iff,
                };
                if let Some(s) = sink_of(op, &children) {
                    return s;
                }
                let mem = match kind {
                    Kind::Junction { plan: Plan::Memory { d2, .. }, .. } => *d2,
                    Kind::Iff { d2, .. } => *d2,
                    _ => 0,
                };
                ProductState::Node { children, mem }
            }
        }
    }

    /// Successor and colour of `q` on `letter`.
    pub fn step(&self, q: &ProductState, letter: Letter) -> (ProductState, u32) {
        self.step_node(&self.root, q, letter)
    }

    fn step_node(&self, node: &Node, q: &ProductState, letter: Letter) -> (ProductState, u32) {
        match q {
            ProductState::Top => return (ProductState::Top, node.p),
            ProductState::Bot => return (ProductState::Bot, 1 - node.p),
            _ => {}
        }
        match &node.kind {
            Kind::WeakLeaf { cosafety, .. } => {
                let ProductState::Weak(f) = q else { unreachable!("weak leaf state") };
                match self.canon(&af(f, letter)) {
                    Formula::True => (ProductState::Top, 0),
                    Formula::False => (ProductState::Bot, 1),
                    g => (ProductState::Weak(g), if *cosafety { 1 } else { 0 }),
                }
            }
            Kind::BuchiLeaf { body, complement } => {
                let ProductState::Buchi { current, next } = q else { unreachable!("Büchi leaf state") };
                let x = self.canon(&af(current, letter));
                let y = self.canon(&Formula::and(af(next, letter), body.clone()));
                let (s, c) = if x == Formula::False || y == Formula::False {
                    (ProductState::Bot, 1)
                } else if x == Formula::True && y == Formula::True {
                    (ProductState::Top, 0)
                } else if x == Formula::True {
                    (ProductState::Buchi { current: y, next: Formula::True }, 0)
                } else {
                    (ProductState::Buchi { current: x, next: y }, 1)
                };
                if *complement {
                    (swap_sinks(s), c)
                } else {
                    (s, c)
                }
            }
            kind => {
                let ProductState::Node { children: qs, mem } = q else { unreachable!("composite state") };
                let steps: Vec<(ProductState, u32)> =
                    node.children().iter().zip(qs).map(|(c, s)| self.step_node(c, s, letter)).collect();
                self.combine(node, kind, *mem, steps)
            }
        }
    }

    fn combine(&self, node: &Node, kind: &Kind, mem: u32, steps: Vec<(ProductState, u32)>) -> (ProductState, u32) {
        let colours: Vec<u32> = steps.iter().map(|s| s.1).collect();
        let states: Vec<ProductState> = steps.into_iter().map(|s| s.0).collect();
        let op = match kind {
            Kind::Weak { op, .. } => *op,
            Kind::Junction { conj: true, .. } => BoolOp::And,
            Kind::Junction { conj: false, .. } => BoolOp::Or,
            _ => BoolOp::Iff,
        };
        match sink_of(op, &states) {
            Some(ProductState::Top) => return (ProductState::Top, node.p),
            Some(_) => return (ProductState::Bot, 1 - node.p),
            None => {}
        }
        let (colour, mem) = match kind {
            Kind::Weak { op, .. } => {
                let acc = colours.iter().map(|&c| c == 0);
                let ok = match op {
                    BoolOp::And => acc.clone().all(|a| a),
                    BoolOp::Or => acc.clone().any(|a| a),
                    BoolOp::Iff => colours[0] == colours[1],
                };
                (if ok { 0 } else { 1 }, 0)
            }
            Kind::Junction { conj, children, plan } => {
                let vp = |i: usize| {
                    if *conj {
                        children[i].p
                    } else {
                        1 - children[i].p
                    }
                };
                match plan {
                    Plan::WeakFilter { filter, other } => {
                        if colours[*filter] == vp(*filter) {
                            (colours[*other], 0)
                        } else {
                            (1 - vp(*other), 0)
                        }
                    }
                    Plan::CoBuchiFilter { filter, other, shift } => {
                        if colours[*filter] == 0 {
                            (0, 0)
                        } else {
                            (colours[*other] + shift, 0)
                        }
                    }
                    Plan::RoundRobin => {
                        let n = colours.len() as u32;
                        let r = round_robin(mem, &colours);
                        (if r == n { 0 } else { 1 }, r % n)
                    }
                    Plan::Memory { buchi, other, shift, d2 } => {
                        let c = mem.min(colours[*other] + shift);
                        if colours[*buchi] == 0 {
                            (c, *d2)
                        } else {
                            (node.d, c)
                        }
                    }
                }
            }
            Kind::Iff { children, first, d2 } => {
                let second = 1 - first;
                let c = mem.min(colours[second]);
                let event = colours[*first] == 0;
                let weak = children[*first].ty == AcceptanceType::Weak;
                let colour = if event { c } else { colours[second] + 1 };
                let mem = if event || weak { *d2 } else { c };
                (colour, mem)
            }
            _ => unreachable!(),
        };
        (ProductState::Node { children: states, mem }, colour)
    }

    /// Transition cells of `q`, partitioning Σ_in × Σ_out.
    pub fn successors(&mut self, q: &ProductState) -> Rc<Vec<Cell>> {
        if self.options.memoize {
            if let Some(cells) = self.memo.get(q) {
                return cells.clone();
            }
        }
        let cells = Rc::new(self.compute_successors(q));
        if self.options.memoize {
            self.memo.insert(q.clone(), cells.clone());
        }
        cells
    }

    /// Number of memoized states.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn compute_successors(&self, q: &ProductState) -> Vec<Cell> {
        let ni = self.alphabet.num_inputs();
        let no = self.alphabet.num_outputs();
        let mut targets: Vec<(ProductState, u32)> = Vec::new();
        let mut target_ids: HashMap<(ProductState, u32), usize> = HashMap::new();
        let mut classes: Vec<(Vec<usize>, Vec<u32>)> = Vec::new();
        let mut class_ids: HashMap<Vec<usize>, usize> = HashMap::new();
        for i in 0..(1u32 << ni) {
            let response: Vec<usize> = (0..(1u32 << no))
                .map(|o| {
                    let t = self.step(q, self.alphabet.letter(i, o));
                    let next = targets.len();
                    *target_ids.entry(t.clone()).or_insert_with(|| {
                        targets.push(t);
                        next
                    })
                })
                .collect();
            match class_ids.get(&response) {
                Some(&k) => classes[k].1.push(i),
                None => {
                    class_ids.insert(response.clone(), classes.len());
                    classes.push((response, vec![i]));
                }
            }
        }
        let mut cells = Vec::new();
        for (response, inputs) in classes {
            let icubes = cover(&inputs, ni);
            let mut by_target: Vec<(usize, Vec<u32>)> = Vec::new();
            for (o, &t) in response.iter().enumerate() {
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, os)) => os.push(o as u32),
                    None => by_target.push((t, vec![o as u32])),
                }
            }
            for (t, outs) in by_target {
                let (successor, colour) = targets[t].clone();
                cells.push(Cell { inputs: icubes.clone(), outputs: cover(&outs, no), colour, successor });
            }
        }
        cells.sort_by(|a, b| a.inputs.cmp(&b.inputs).then_with(|| a.outputs.cmp(&b.outputs)));
        cells
    }

    /// Text listing of the automaton reachable from the initial state, at
    /// most `limit` states. One `State:` line per state followed by one line
    /// per cell: `[inputs] [outputs] {colour} -> target`.
    pub fn dump(&mut self, limit: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "States-limit: {limit}");
        let _ = writeln!(out, "Parity: {} Colours: {}", self.parity(), self.max_colour() + 1);
        let init = self.initial();
        let mut ids: HashMap<ProductState, usize> = HashMap::new();
        let mut order = vec![init.clone()];
        ids.insert(init, 0);
        let mut k = 0;
        while k < order.len() && k < limit {
            let q = order[k].clone();
            let _ = writeln!(out, "State: {} {}", k, q.render(&self.alphabet));
            let cells = self.successors(&q);
            for cell in cells.iter() {
                let next = ids.len();
                let t = *ids.entry(cell.successor.clone()).or_insert_with(|| {
                    order.push(cell.successor.clone());
                    next
                });
                let ins: Vec<String> = cell.inputs.iter().map(|c| c.render(self.alphabet.inputs())).collect();
                let outs: Vec<String> = cell.outputs.iter().map(|c| c.render(self.alphabet.outputs())).collect();
                let _ = writeln!(out, "  [{}] [{}] {{{}}} -> {}", ins.join(" | "), outs.join(" | "), cell.colour, t);
            }
            k += 1;
        }
        out
    }

    pub fn shape(&self) -> Shape {
        self.root.shape()
    }

    pub(crate) fn root(&self) -> &Node {
        &self.root
    }
}

fn swap_sinks(s: ProductState) -> ProductState {
    match s {
        ProductState::Bot => ProductState::Top,
        ProductState::Top => ProductState::Bot,
        s => s,
    }
}

/// r′ = max{ s ∈ {r..n} | ∀ r < j ≤ s : χ_j = 0 } with children numbered from 1.
fn round_robin(r: u32, colours: &[u32]) -> u32 {
    let mut s = r;
    while (s as usize) < colours.len() && colours[s as usize] == 0 {
        s += 1;
    }
    s
}
