//! Choice of the boundary nodes to expand next.

use crate::arena::{Arena, NodeId};
use std::fmt::{self, Write as _};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exploration {
    /// Shallowest boundary node first.
    Bfs,
    /// Like `Bfs`, restricted to nodes reachable through undecided nodes.
    BfsPlus,
    /// Lowest minimal score and highest maximal score.
    Pq,
    /// Like `Pq`, restricted to nodes reachable through undecided nodes.
    PqPlus,
}

impl Exploration {
    pub const ALL: [Exploration; 4] = [Exploration::Bfs, Exploration::BfsPlus, Exploration::Pq, Exploration::PqPlus];
}

impl fmt::Display for Exploration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exploration::Bfs => "bfs",
            Exploration::BfsPlus => "bfs+",
            Exploration::Pq => "pq",
            Exploration::PqPlus => "pq+",
        })
    }
}

impl FromStr for Exploration {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Exploration::Bfs),
            "bfs+" => Ok(Exploration::BfsPlus),
            "pq" => Ok(Exploration::Pq),
            "pq+" => Ok(Exploration::PqPlus),
            _ => Err(format!("unknown exploration `{s}` (expected bfs, bfs+, pq or pq+)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExploreError {
    #[error("the boundary is empty")]
    EmptyBoundary,
}

/// Nodes won by each player according to the latest solver calls.
#[derive(Clone, Debug, Default)]
pub struct Winners {
    pub controller: Vec<bool>,
    pub environment: Vec<bool>,
}

impl Winners {
    pub fn decided(&self, v: NodeId) -> bool {
        self.controller.get(v).copied().unwrap_or(false) || self.environment.get(v).copied().unwrap_or(false)
    }
}

/// Boundary nodes reachable from the initial node along undecided nodes only.
pub fn filter(arena: &Arena, winners: &Winners) -> Vec<NodeId> {
    let n = arena.len();
    let mut seen = vec![false; n];
    let q0 = arena.initial();
    if winners.decided(q0) {
        return Vec::new();
    }
    let mut queue = std::collections::VecDeque::from([q0]);
    seen[q0] = true;
    while let Some(v) = queue.pop_front() {
        for e in &arena.node(v).edges {
            if !seen[e.to] && !winners.decided(e.to) {
                seen[e.to] = true;
                queue.push_back(e.to);
            }
        }
    }
    arena.boundary().iter().copied().filter(|&b| seen[b]).collect()
}

/// Shallowest candidate (or all candidates at that depth when `layer` is set).
pub fn explore_bfs(arena: &Arena, candidates: &[NodeId], layer: bool) -> Result<Vec<NodeId>, ExploreError> {
    let depth = candidates.iter().map(|&b| arena.node(b).depth).min().ok_or(ExploreError::EmptyBoundary)?;
    let mut at_min = candidates.iter().copied().filter(|&b| arena.node(b).depth == depth);
    Ok(if layer { at_min.collect() } else { at_min.next().into_iter().collect() })
}

fn scores(arena: &Arena, b: NodeId) -> (f64, f64) {
    arena.node(b).score.unwrap_or((0.5, 0.5))
}

/// The candidate with the lowest minimal score and the one with the highest
/// maximal score; ties go to the earliest discovered.
pub fn explore_pq(arena: &Arena, candidates: &[NodeId]) -> Result<Vec<NodeId>, ExploreError> {
    let first = *candidates.first().ok_or(ExploreError::EmptyBoundary)?;
    let (mut lo, mut hi) = (first, first);
    for &b in &candidates[1..] {
        if scores(arena, b).0 < scores(arena, lo).0 {
            lo = b;
        }
        if scores(arena, b).1 > scores(arena, hi).1 {
            hi = b;
        }
    }
    Ok(if lo == hi { vec![lo] } else { vec![lo, hi] })
}

/// Nodes to expand next.
pub fn explore(
    arena: &Arena,
    method: Exploration,
    winners: &Winners,
    layer: bool,
) -> Result<Vec<NodeId>, ExploreError> {
    let all = arena.boundary();
    if all.is_empty() {
        return Err(ExploreError::EmptyBoundary);
    }
    let filtered;
    let candidates = match method {
        Exploration::Bfs | Exploration::Pq => all,
        Exploration::BfsPlus | Exploration::PqPlus => {
            filtered = filter(arena, winners);
            if filtered.is_empty() {
                log::info!("{method}: no unblocked boundary node, using the whole boundary");
                all
            } else {
                &filtered
            }
        }
    };
    match method {
        Exploration::Bfs | Exploration::BfsPlus => explore_bfs(arena, candidates, layer),
        Exploration::Pq | Exploration::PqPlus => explore_pq(arena, candidates),
    }
}

/// Boundary listing with depths and scores, one node per line.
pub fn score_trace(arena: &Arena) -> String {
    let mut out = String::new();
    for &b in arena.boundary() {
        let (lo, hi) = scores(arena, b);
        let _ = writeln!(out, "{b} depth={} min={lo:.4} max={hi:.4}", arena.node(b).depth);
    }
    out
}
