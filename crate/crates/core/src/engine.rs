//! The synthesis loop: expand the arena, then let both players try to win
//! the initial node, reusing their strategies from the previous round.

use crate::arena::{Arena, ArenaError};
use crate::automata::{build, BuildError, BuildOptions, Dpa};
use crate::explorer::{explore, Exploration, ExploreError, Winners};
use crate::ltl::{annotate, Alphabet, Formula};
use crate::solver::{solve, Player, Strategy};

#[derive(Clone, Debug)]
pub struct Options {
    pub exploration: Exploration,
    /// Expand a whole BFS layer at once instead of a single node.
    pub bfs_layer: bool,
    /// Upper bound on explored environment nodes.
    pub max_states: usize,
    pub build: BuildOptions,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            exploration: Exploration::Bfs,
            bfs_layer: false,
            max_states: 1_000_000,
            build: BuildOptions::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("state limit of {0} environment nodes exceeded")]
    StateLimit(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<ExploreError> for EngineError {
    fn from(e: ExploreError) -> Self {
        EngineError::Internal(format!("game fully explored but undecided ({e})"))
    }
}

impl From<ArenaError> for EngineError {
    fn from(e: ArenaError) -> Self {
        EngineError::Internal(e.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Explored environment nodes, sinks included.
    pub env_nodes: usize,
    /// Arena nodes of both players.
    pub nodes: usize,
    /// Expansion rounds.
    pub iterations: usize,
    pub solver_calls: usize,
    /// Strategy improvement steps over all solver calls.
    pub improvements: usize,
    pub progress_violations: usize,
}

pub struct Outcome {
    pub winner: Player,
    /// Winning strategy of `winner`.
    pub strategy: Strategy,
    /// Nodes won by `winner` in the final arena.
    pub won: Vec<bool>,
    pub arena: Arena,
    pub dpa: Dpa,
    pub stats: Stats,
}

/// Decide the game for `formula` and return the winner with its strategy.
pub fn synthesize(formula: &Formula, alphabet: &Alphabet, options: &Options) -> Result<Outcome, EngineError> {
    let annotated = annotate(formula);
    let mut dpa = build(&annotated, alphabet, options.build.clone())?;
    let p = dpa.parity();
    let mut arena = Arena::new(dpa.initial(), p, dpa.max_colour());
    let (mut sigma, mut tau) = (Strategy::new(), Strategy::new());
    let mut stats = Stats::default();
    let q0 = arena.initial();
    loop {
        let game = arena.game();
        let rc = solve(&game, Player::Controller, p, &sigma);
        let re = solve(&game, Player::Environment, 1 - p, &tau);
        stats.solver_calls += 2;
        stats.improvements += rc.iterations + re.iterations;
        stats.progress_violations += rc.progress_violations + re.progress_violations;
        log::debug!(
            "round {}: {} env nodes, boundary {}, q0 won by controller {} / environment {}",
            stats.iterations,
            arena.env_count(),
            arena.boundary().len(),
            rc.won[q0],
            re.won[q0]
        );
        if rc.won[q0] || re.won[q0] {
            let (winner, r) = if rc.won[q0] { (Player::Controller, rc) } else { (Player::Environment, re) };
            stats.env_nodes = arena.env_count();
            stats.nodes = arena.len();
            return Ok(Outcome { winner, strategy: r.strategy, won: r.won, arena, dpa, stats });
        }
        sigma = rc.strategy;
        tau = re.strategy;
        let winners = Winners { controller: rc.won, environment: re.won };
        let xs = explore(&arena, options.exploration, &winners, options.bfs_layer)?;
        arena.expand(&xs, &mut dpa)?;
        stats.iterations += 1;
        if arena.env_count() > options.max_states {
            return Err(EngineError::StateLimit(options.max_states));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn run(text: &str, ins: &[&str], outs: &[&str], exploration: Exploration) -> Outcome {
        let ab = Alphabet::new(ins, outs).unwrap();
        let f = parse(text, &ab).unwrap();
        synthesize(&f, &ab, &Options { exploration, ..Default::default() }).unwrap()
    }

    #[test]
    fn arbiter_is_realizable() {
        for e in Exploration::ALL {
            let o = run("G (!g1 | !g2) & G (r1 -> F g1) & G (r2 -> F g2)", &["r1", "r2"], &["g1", "g2"], e);
            assert_eq!(o.winner, Player::Controller, "{e}");
            assert_eq!(o.stats.progress_violations, 0);
        }
    }

    #[test]
    fn contradiction_is_unrealizable() {
        let o = run("G g & F !g", &[], &["g"], Exploration::Bfs);
        assert_eq!(o.winner, Player::Environment);
    }

    #[test]
    fn copy_last_input() {
        let o = run("G (r <-> X g)", &["r"], &["g"], Exploration::Bfs);
        assert_eq!(o.winner, Player::Controller);
        // Predicting the next input is impossible.
        let o = run("G (g <-> X r)", &["r"], &["g"], Exploration::Bfs);
        assert_eq!(o.winner, Player::Environment);
    }

    #[test]
    fn state_limit() {
        let ab = Alphabet::new(&["r1", "r2"], &["g1", "g2"]).unwrap();
        let f = parse("G (!g1 | !g2) & G (r1 -> F g1) & G (r2 -> F g2)", &ab).unwrap();
        let r = synthesize(&f, &ab, &Options { max_states: 3, ..Default::default() });
        assert!(matches!(r, Err(EngineError::StateLimit(3))));
    }

    #[test]
    fn parity_leaf_is_reported() {
        let ab = Alphabet::new(&["a"], &["b"]).unwrap();
        let f = parse("a U G b", &ab).unwrap();
        assert!(matches!(synthesize(&f, &ab, &Options::default()), Err(EngineError::Build(_))));
    }

    #[test]
    fn trivial_specs() {
        assert_eq!(run("true", &["a"], &["b"], Exploration::Bfs).winner, Player::Controller);
        assert_eq!(run("false", &["a"], &["b"], Exploration::Bfs).winner, Player::Environment);
        assert_eq!(run("G F a", &["a"], &["b"], Exploration::Pq).winner, Player::Environment);
        assert_eq!(run("G F b", &["a"], &["b"], Exploration::PqPlus).winner, Player::Controller);
    }
}
