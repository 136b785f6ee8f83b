//! Incrementally explored game arena with Mealy semantics: the environment
//! picks an input class at a product state, then the controller picks an
//! output class leading to the next product state.

use crate::automata::{Dpa, ProductState};
use crate::cube::Cube;
use crate::solver::{Fixed, Game, Player};
use std::collections::HashMap;

pub type NodeId = usize;

/// Rejecting sink.
pub const BOT: NodeId = 0;
/// Accepting sink.
pub const TOP: NodeId = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    /// Environment node for an automaton state.
    Env(ProductState),
    /// Controller node reached from `parent` on an input class.
    Inter { parent: NodeId, inputs: Vec<Cube> },
}

/// Edge with its colour (`None` is the neutral colour) and letter label:
/// output cubes on controller edges, input cubes on environment edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub to: NodeId,
    pub colour: Option<u32>,
    pub label: Vec<Cube>,
}

#[derive(Clone, Debug)]
pub struct ArenaNode {
    pub kind: NodeKind,
    pub edges: Vec<Edge>,
    /// Distance from the initial node in environment steps, at discovery.
    pub depth: u32,
    /// Least and greatest score of incoming transitions seen while on the boundary.
    pub score: Option<(f64, f64)>,
}

impl ArenaNode {
    pub fn owner(&self) -> Player {
        match self.kind {
            NodeKind::Env(_) => Player::Environment,
            NodeKind::Inter { .. } => Player::Controller,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArenaError {
    #[error("node {0} is not on the boundary")]
    NotBoundary(NodeId),
}

pub struct Arena {
    nodes: Vec<ArenaNode>,
    index: HashMap<ProductState, NodeId>,
    boundary: Vec<NodeId>,
    on_boundary: Vec<bool>,
    initial: NodeId,
    parity: u32,
    colours: usize,
}

impl Arena {
    /// Arena with the two sinks and the initial node, which forms the boundary.
    pub fn new(q0: ProductState, parity: u32, max_colour: u32) -> Arena {
        let sink = |s: ProductState, c: u32, id: NodeId| ArenaNode {
            kind: NodeKind::Env(s),
            edges: vec![Edge { to: id, colour: Some(c), label: vec![Cube::TOP] }],
            depth: 0,
            score: None,
        };
        let mut a = Arena {
            nodes: vec![sink(ProductState::Bot, 1 - parity, BOT), sink(ProductState::Top, parity, TOP)],
            index: HashMap::new(),
            boundary: Vec::new(),
            on_boundary: vec![false, false],
            initial: BOT,
            parity,
            colours: max_colour as usize + 1,
        };
        a.index.insert(ProductState::Bot, BOT);
        a.index.insert(ProductState::Top, TOP);
        a.initial = a.env_node(q0, 0).0;
        a
    }

    /// Node for `q`, created on the boundary if new.
    fn env_node(&mut self, q: ProductState, depth: u32) -> (NodeId, bool) {
        if let Some(&id) = self.index.get(&q) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.index.insert(q.clone(), id);
        self.nodes.push(ArenaNode { kind: NodeKind::Env(q), edges: Vec::new(), depth, score: None });
        self.boundary.push(id);
        self.on_boundary.push(true);
        (id, true)
    }

    pub fn initial(&self) -> NodeId {
        self.initial
    }

    pub fn parity(&self) -> u32 {
        self.parity
    }

    /// Number of colours (maximal colour + 1).
    pub fn colours(&self) -> usize {
        self.colours
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &ArenaNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[ArenaNode] {
        &self.nodes
    }

    /// Product state of an environment node.
    pub fn state(&self, id: NodeId) -> Option<&ProductState> {
        match &self.nodes[id].kind {
            NodeKind::Env(q) => Some(q),
            NodeKind::Inter { .. } => None,
        }
    }

    pub fn lookup(&self, q: &ProductState) -> Option<NodeId> {
        self.index.get(q).copied()
    }

    /// Number of environment nodes, sinks included.
    pub fn env_count(&self) -> usize {
        self.index.len()
    }

    /// Unexplored environment nodes in discovery order.
    pub fn boundary(&self) -> &[NodeId] {
        &self.boundary
    }

    pub fn on_boundary(&self, id: NodeId) -> bool {
        self.on_boundary[id]
    }

    /// Explore the successors of the boundary nodes `xs`.
    pub fn expand(&mut self, xs: &[NodeId], dpa: &mut Dpa) -> Result<(), ArenaError> {
        for &x in xs {
            if x >= self.nodes.len() || !self.on_boundary[x] {
                return Err(ArenaError::NotBoundary(x));
            }
        }
        for &x in xs {
            if !self.on_boundary[x] {
                continue; // listed twice
            }
            self.on_boundary[x] = false;
            let q = self.state(x).expect("boundary holds environment nodes").clone();
            let depth = self.nodes[x].depth;
            let cells = dpa.successors(&q);
            let mut k = 0;
            while k < cells.len() {
                let inputs = cells[k].inputs.clone();
                let inter = self.nodes.len();
                self.nodes.push(ArenaNode {
                    kind: NodeKind::Inter { parent: x, inputs: inputs.clone() },
                    edges: Vec::new(),
                    depth,
                    score: None,
                });
                self.on_boundary.push(false);
                self.nodes[x].edges.push(Edge { to: inter, colour: None, label: inputs.clone() });
                while k < cells.len() && cells[k].inputs == inputs {
                    let cell = &cells[k];
                    let (to, _) = self.env_node(cell.successor.clone(), depth + 1);
                    if self.on_boundary[to] {
                        let letter = dpa.alphabet().letter(cell.inputs[0].first(), cell.outputs[0].first());
                        let s = dpa.score(&q, letter);
                        let sc = &mut self.nodes[to].score;
                        *sc = Some(match *sc {
                            None => (s, s),
                            Some((lo, hi)) => (lo.min(s), hi.max(s)),
                        });
                    }
                    self.nodes[inter].edges.push(Edge { to, colour: Some(cell.colour), label: cell.outputs.clone() });
                    k += 1;
                }
            }
        }
        self.boundary.retain(|&b| self.on_boundary[b]);
        Ok(())
    }

    /// Snapshot as an explicit game: sinks are won by their player, boundary
    /// nodes are marked as such.
    pub fn game(&self) -> Game {
        let mut g = Game::new(self.colours);
        for (id, n) in self.nodes.iter().enumerate() {
            let v = g.add_node(n.owner());
            for e in &n.edges {
                g.edges[v].push((e.to, e.colour));
            }
            g.fixed[v] = if id == BOT {
                Some(Fixed::WonBy(Player::Environment))
            } else if id == TOP {
                Some(Fixed::WonBy(Player::Controller))
            } else if self.on_boundary[id] {
                Some(Fixed::Boundary)
            } else {
                None
            };
        }
        g
    }

    /// Text listing in the explicit game format.
    pub fn dump(&self) -> String {
        self.game().to_text()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{build, BuildOptions};
    use crate::cube::covers;
    use crate::ltl::{annotate, parse, Alphabet};

    fn arbiter() -> Dpa {
        let ab = Alphabet::new(&["r1", "r2"], &["g1", "g2"]).unwrap();
        let f = parse("G (!g1 | !g2) & G (r1 -> F g1) & G (r2 -> F g2)", &ab).unwrap();
        build(&annotate(&f), &ab, BuildOptions::default()).unwrap()
    }

    fn check_invariants(a: &Arena) {
        for (id, n) in a.nodes().iter().enumerate() {
            if a.on_boundary(id) {
                assert!(n.edges.is_empty());
                assert!(matches!(n.kind, NodeKind::Env(_)));
            } else {
                assert!(!n.edges.is_empty(), "node {id} has no edges");
            }
            match &n.kind {
                NodeKind::Env(_) if id > TOP => assert!(n.edges.iter().all(|e| e.colour.is_none())),
                NodeKind::Inter { .. } => assert!(n.edges.iter().all(|e| e.colour.is_some())),
                _ => {}
            }
        }
    }

    #[test]
    fn initial_arena() {
        let d = arbiter();
        let a = Arena::new(d.initial(), d.parity(), d.max_colour());
        assert_eq!(a.env_count(), 3);
        assert_eq!(a.boundary(), &[2]);
        assert_eq!(a.initial(), 2);
        assert_eq!(a.node(BOT).edges[0].colour, Some(1));
        assert_eq!(a.node(TOP).edges[0].colour, Some(0));
        let b = Arena::new(d.initial(), 1, 1);
        assert_eq!(b.node(BOT).edges[0].colour, Some(0));
        assert_eq!(b.node(TOP).edges[0].colour, Some(1));
        check_invariants(&a);
    }

    #[test]
    fn first_expansion() {
        let mut d = arbiter();
        let mut a = Arena::new(d.initial(), d.parity(), d.max_colour());
        a.expand(&[a.initial()], &mut d).unwrap();
        check_invariants(&a);
        // One intermediate node per input letter, three new boundary nodes.
        assert_eq!(a.node(a.initial()).edges.len(), 4);
        assert_eq!(a.boundary().len(), 3);
        assert!(a.boundary().iter().all(|&b| a.node(b).depth == 1 && a.node(b).score.is_some()));
        assert_eq!(a.expand(&[a.initial()], &mut d), Err(ArenaError::NotBoundary(2)));
    }

    #[test]
    fn cells_partition_and_colours_agree() {
        let mut d = arbiter();
        let mut a = Arena::new(d.initial(), d.parity(), d.max_colour());
        while !a.boundary().is_empty() {
            let b = a.boundary().to_vec();
            a.expand(&b, &mut d).unwrap();
            check_invariants(&a);
        }
        for n in a.nodes() {
            let NodeKind::Env(q) = &n.kind else { continue };
            if q.is_sink() {
                continue;
            }
            for i in 0..4 {
                for o in 0..4 {
                    let hits: Vec<(NodeId, u32)> = n
                        .edges
                        .iter()
                        .filter(|e| covers(&e.label, i))
                        .flat_map(|e| a.node(e.to).edges.iter().filter(|f| covers(&f.label, o)))
                        .map(|f| (f.to, f.colour.unwrap()))
                        .collect();
                    assert_eq!(hits.len(), 1);
                    let (q2, c) = d.step(q, d.alphabet().letter(i, o));
                    assert_eq!((a.lookup(&q2).unwrap(), c), hits[0]);
                }
            }
        }
    }

    #[test]
    fn expanding_into_sinks_only() {
        let ab = Alphabet::new(&["a"], &["b"]).unwrap();
        let f = parse("a <-> b", &ab).unwrap();
        let mut d = build(&annotate(&f), &ab, BuildOptions::default()).unwrap();
        let mut a = Arena::new(d.initial(), d.parity(), d.max_colour());
        let q0 = a.initial();
        assert!(q0 > TOP);
        a.expand(&[q0], &mut d).unwrap();
        assert!(a.boundary().is_empty());
        assert_eq!(a.env_count(), 3);
    }

    #[test]
    fn dump_parses() {
        let mut d = arbiter();
        let mut a = Arena::new(d.initial(), d.parity(), d.max_colour());
        a.expand(&[a.initial()], &mut d).unwrap();
        let g = Game::parse(&a.dump()).unwrap();
        assert_eq!(g, a.game());
    }
}
