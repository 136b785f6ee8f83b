//! Parity games with edge colours, solved by nondeterministic strategy
//! iteration over colour-count weights, plus a recursive reference solver.
//!
//! A play is won by the player whose parity matches the least colour seen
//! infinitely often. Edges may carry no colour (the neutral `∞`).

mod game;
mod zielonka;

pub use game::{Fixed, Game, GameParseError};
pub use zielonka::solve_zielonka;

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Controller,
    Environment,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Controller => Player::Environment,
            Player::Environment => Player::Controller,
        }
    }
}

/// Number of occurrences of each colour along a finite path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn zero(colours: usize) -> Weight {
        Weight(vec![0; colours])
    }

    /// The weight of a single edge; the neutral colour weighs nothing.
    pub fn unit(colours: usize, colour: Option<u32>) -> Weight {
        let mut w = Weight::zero(colours);
        if let Some(c) = colour {
            w.0[c as usize] = 1;
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn plus(&self, colour: Option<u32>) -> Weight {
        let mut w = self.clone();
        if let Some(c) = colour {
            w.0[c as usize] += 1;
        }
        w
    }
}

/// Compare weights for the player with parity `p`: at the least colour where
/// they differ, more of a colour of parity `p` is better, more of the other
/// parity is worse.
pub fn cmp(g: &Weight, h: &Weight, p: u32) -> Ordering {
    for (c, (a, b)) in g.0.iter().zip(&h.0).enumerate() {
        if a != b {
            return if c as u32 % 2 == p % 2 { a.cmp(b) } else { b.cmp(a) };
        }
    }
    Ordering::Equal
}

/// Value of a node under a strategy: a finite weight or one of the infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    NegInf,
    Finite(Weight),
    PosInf,
}

impl Distance {
    fn plus(&self, colour: Option<u32>) -> Distance {
        match self {
            Distance::Finite(w) => Distance::Finite(w.plus(colour)),
            d => d.clone(),
        }
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, Distance::PosInf)
    }
}

pub fn cmp_distance(a: &Distance, b: &Distance, p: u32) -> Ordering {
    use Distance::*;
    match (a, b) {
        (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
        (NegInf, _) | (_, PosInf) => Ordering::Less,
        (_, NegInf) | (PosInf, _) => Ordering::Greater,
        (Finite(g), Finite(h)) => cmp(g, h, p),
    }
}

/// Choices of the main player at one node: a set of edge indices and/or
/// the give-up target `•`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub edges: Vec<usize>,
    pub give_up: bool,
}

static GIVE_UP: Move = Move { edges: Vec::new(), give_up: true };

impl Move {
    pub fn give_up() -> Move {
        GIVE_UP.clone()
    }
}

/// Nondeterministic positional strategy. Nodes without an entry give up.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Strategy {
    moves: Vec<Option<Move>>,
}

impl Strategy {
    pub fn new() -> Strategy {
        Strategy::default()
    }

    pub fn get(&self, v: usize) -> &Move {
        self.moves.get(v).and_then(|m| m.as_ref()).unwrap_or(&GIVE_UP)
    }

    pub fn set(&mut self, v: usize, m: Move) {
        if self.moves.len() <= v {
            self.moves.resize(v + 1, None);
        }
        self.moves[v] = Some(m);
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// `won[v]` iff the main player wins from `v`.
    pub won: Vec<bool>,
    pub strategy: Strategy,
    pub distances: Vec<Distance>,
    pub iterations: usize,
    /// Improvement steps after which the distances did not grow as expected.
    pub progress_violations: usize,
}

fn fixed_value(f: Fixed, player: Player, colours: usize) -> Distance {
    match f {
        Fixed::Boundary => Distance::Finite(Weight::zero(colours)),
        Fixed::WonBy(w) if w == player => Distance::PosInf,
        Fixed::WonBy(_) => Distance::NegInf,
    }
}

/// Nodes lying on a cycle whose least colour has the opponent's parity.
/// Opponent nodes use all their edges; main-player nodes use the edges of
/// `kappa`, or none at all when `kappa` is `None`. With `None` these cycles
/// are out of the main player's hands and are worth `-∞`.
fn losing_cycles(game: &Game, player: Player, p: u32, kappa: Option<&Strategy>) -> Vec<bool> {
    let n = game.len();
    let mut out = vec![false; n];
    let free = |v: usize| game.fixed[v].is_none() && (game.owner[v] != player || kappa.is_some());
    let succ = |v: usize| -> Vec<(usize, Option<u32>)> {
        if !free(v) {
            return Vec::new();
        }
        match kappa {
            Some(k) if game.owner[v] == player => {
                k.get(v).edges.iter().filter_map(|&e| game.edges[v].get(e).copied()).collect()
            }
            _ => game.edges[v].clone(),
        }
        .into_iter()
        .filter(|&(w, _)| free(w))
        .collect()
    };
    let all: Vec<Vec<(usize, Option<u32>)>> = (0..n).map(succ).collect();
    for c in (0..game.colours as u32).filter(|c| c % 2 != p % 2) {
        // Subgraph of edges with colour >= c.
        let adj: Vec<Vec<usize>> = all
            .iter()
            .map(|es| es.iter().filter(|(_, col)| col.is_none_or(|x| x >= c)).map(|(w, _)| *w).collect())
            .collect();
        let comp = scc(&adj);
        let mut bad = vec![false; n];
        for (v, es) in all.iter().enumerate() {
            for (w, col) in es {
                if *col == Some(c) && comp[v] == comp[*w] {
                    bad[comp[v]] = true;
                }
            }
        }
        for v in (0..n).filter(|&v| free(v) && bad[comp[v]]) {
            out[v] = true;
        }
    }
    out
}

/// Strongly connected components (Tarjan, iterative); returns a component id per node.
pub(crate) fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Value of every node when the main player is restricted to `kappa` and
/// the opponent plays freely. Boundary nodes and `•` are worth 0.
///
/// Iterates downwards from `+∞`, so cycles the opponent cannot leave keep
/// their infinite value; this is sound as long as every cycle the main
/// player can be held on is winning for that player, which strategies produced by
/// [`improve`] guarantee. Nodes that keep decreasing past the round bound
/// sit on a losing cycle and are set to `-∞`.
pub fn evaluate(game: &Game, kappa: &Strategy, player: Player, p: u32) -> Vec<Distance> {
    let n = game.len();
    let colours = game.colours;
    let zero = Distance::Finite(Weight::zero(colours));
    let hostile = losing_cycles(game, player, p, None);
    let mut d: Vec<Distance> = (0..n)
        .map(|v| match game.fixed[v] {
            Some(f) => fixed_value(f, player, colours),
            None if hostile[v] => Distance::NegInf,
            None => Distance::PosInf,
        })
        .collect();
    let frozen: Vec<bool> = (0..n).map(|v| game.fixed[v].is_some() || hostile[v]).collect();
    let bound = 2 * n + 2;
    let mut rounds = 0;
    loop {
        let mut changed = Vec::new();
        for v in 0..n {
            if frozen[v] || d[v] == Distance::NegInf {
                continue;
            }
            let new = relax(game, kappa, player, p, &d, v, &zero);
            if new != d[v] {
                d[v] = new;
                changed.push(v);
            }
        }
        if changed.is_empty() {
            return d;
        }
        rounds += 1;
        if rounds > bound {
            log::debug!("evaluate: {} nodes still decreasing, set to -inf", changed.len());
            for v in changed {
                d[v] = Distance::NegInf;
            }
            rounds = 0;
        }
    }
}

fn relax(game: &Game, kappa: &Strategy, player: Player, p: u32, d: &[Distance], v: usize, zero: &Distance) -> Distance {
    let edges = &game.edges[v];
    if edges.is_empty() {
        return zero.clone();
    }
    if game.owner[v] == player {
        let m = kappa.get(v);
        let mut best: Option<Distance> = if m.give_up || m.edges.is_empty() { Some(zero.clone()) } else { None };
        for &e in &m.edges {
            let (w, c) = edges[e];
            let x = d[w].plus(c);
            if best.as_ref().is_none_or(|b| cmp_distance(&x, b, p) == Ordering::Greater) {
                best = Some(x);
            }
        }
        best.expect("nonempty move")
    } else {
        edges.iter().map(|&(w, c)| d[w].plus(c)).min_by(|a, b| cmp_distance(a, b, p)).expect("nonempty edges")
    }
}

/// One improvement step. Every node of the main player switches to all of
/// its best choices when one of them is strictly better than its current
/// value; otherwise it keeps those of its current choices that attain the
/// value. Returns the new strategy and whether any node improved.
pub fn improve(game: &Game, kappa: &Strategy, d: &[Distance], player: Player, p: u32) -> (Strategy, bool) {
    let zero = Distance::Finite(Weight::zero(game.colours));
    let mut next = kappa.clone();
    let mut improved = false;
    for v in 0..game.len() {
        if game.owner[v] != player || game.fixed[v].is_some() || game.edges[v].is_empty() {
            continue;
        }
        let values: Vec<Distance> = game.edges[v].iter().map(|&(w, c)| d[w].plus(c)).collect();
        let mut best = zero.clone();
        for x in &values {
            if cmp_distance(x, &best, p) == Ordering::Greater {
                best = x.clone();
            }
        }
        let attains = |x: &Distance, target: &Distance| cmp_distance(x, target, p) == Ordering::Equal;
        if cmp_distance(&best, &d[v], p) == Ordering::Greater {
            improved = true;
            let edges: Vec<usize> = (0..values.len()).filter(|&e| attains(&values[e], &best)).collect();
            next.set(v, Move { edges, give_up: attains(&zero, &best) });
        } else {
            let cur = kappa.get(v);
            let edges: Vec<usize> = cur.edges.iter().copied().filter(|&e| attains(&values[e], &d[v])).collect();
            let give_up = (cur.give_up || cur.edges.is_empty()) && attains(&zero, &d[v]);
            if edges.is_empty() && !give_up {
                continue;
            }
            next.set(v, Move { edges, give_up });
        }
    }
    (next, improved)
}

/// `a ≥ b` pointwise and `a > b` somewhere.
fn progressed(a: &[Distance], b: &[Distance], p: u32) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        match cmp_distance(x, y, p) {
            Ordering::Less => return false,
            Ordering::Greater => strict = true,
            Ordering::Equal => {}
        }
    }
    strict
}

/// Strategy iteration from `kappa0` for `player`, who wins with parity `p`.
/// Boundary nodes count as losing for `player`.
/// An initial strategy taken over from a smaller game may allow a losing
/// cycle through newly added edges; the main player's nodes on such cycles
/// give up instead.
pub fn solve(game: &Game, player: Player, p: u32, kappa0: &Strategy) -> SolveResult {
    let mut kappa = kappa0.clone();
    let stale = losing_cycles(game, player, p, Some(&kappa));
    for v in (0..game.len()).filter(|&v| stale[v] && game.owner[v] == player) {
        kappa.set(v, Move::give_up());
    }
    let mut d = evaluate(game, &kappa, player, p);
    let mut iterations = 0;
    let mut progress_violations = 0;
    loop {
        let (next, improved) = improve(game, &kappa, &d, player, p);
        kappa = next;
        if !improved {
            break;
        }
        iterations += 1;
        let d2 = evaluate(game, &kappa, player, p);
        if !progressed(&d2, &d, p) {
            progress_violations += 1;
            log::warn!("strategy iteration: improvement step without progress");
            d = d2;
            break;
        }
        d = d2;
    }
    let won = d.iter().map(Distance::is_pos_inf).collect();
    SolveResult { won, strategy: kappa, distances: d, iterations, progress_violations }
}
