mod common;

use common::*;
use lsynth::solver::{evaluate, solve, solve_zielonka, Game, Player, Strategy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIDES: [(Player, u32); 4] =
    [(Player::Controller, 0), (Player::Controller, 1), (Player::Environment, 0), (Player::Environment, 1)];

fn game(seed: u64, max: usize) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max);
    let colours = rng.gen_range(1..=4);
    random_game(&mut rng, n, colours)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn strategy_iteration_matches_zielonka(seed in any::<u64>()) {
        let g = game(seed, 25);
        for (player, p) in SIDES {
            let r = solve(&g, player, p, &Strategy::new());
            prop_assert_eq!(&r.won, &solve_zielonka(&g, player, p), "{}", g.to_text());
            prop_assert_eq!(r.progress_violations, 0);
        }
    }

    #[test]
    fn both_sides_partition_the_nodes(seed in any::<u64>()) {
        let g = game(seed, 25);
        for p in 0..2 {
            let c = solve(&g, Player::Controller, p, &Strategy::new()).won;
            let e = solve(&g, Player::Environment, 1 - p, &Strategy::new()).won;
            prop_assert!(c.iter().zip(&e).all(|(a, b)| a != b));
        }
    }

    #[test]
    fn final_strategy_evaluates_to_its_distances(seed in any::<u64>()) {
        let g = game(seed, 20);
        for (player, p) in SIDES {
            let r = solve(&g, player, p, &Strategy::new());
            prop_assert_eq!(evaluate(&g, &r.strategy, player, p), r.distances);
        }
    }

    /// Wins on a partially explored game, with strategies carried from one
    /// expansion to the next, hold in the full game.
    #[test]
    fn partial_wins_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = game(rng.gen(), 20);
        let n = full.len();
        let truth = [solve_zielonka(&full, Player::Controller, 0), solve_zielonka(&full, Player::Environment, 1)];
        let mut expanded = vec![false; n];
        let mut discovered = vec![false; n];
        discovered[0] = true;
        let mut kept = [Strategy::new(), Strategy::new()];
        loop {
            let g = partial(&full, &expanded);
            for (k, (player, p)) in [(Player::Controller, 0), (Player::Environment, 1)].into_iter().enumerate() {
                let r = solve(&g, player, p, &kept[k]);
                prop_assert_eq!(r.progress_violations, 0);
                for v in (0..n).filter(|&v| discovered[v] && r.won[v]) {
                    prop_assert!(truth[k][v], "{:?} wins {} early only\n{}", player, v, g.to_text());
                }
                kept[k] = r.strategy;
            }
            let frontier: Vec<usize> = (0..n).filter(|&v| discovered[v] && !expanded[v]).collect();
            if frontier.is_empty() {
                break;
            }
            let v = frontier[rng.gen_range(0..frontier.len())];
            expanded[v] = true;
            for &(w, _) in &full.edges[v] {
                discovered[w] = true;
            }
        }
    }
}

#[test]
fn text_format_round_trips_random_games() {
    for seed in 0..50 {
        let g = game(seed, 30);
        let back = Game::parse(&g.to_text()).unwrap();
        assert_eq!(back.to_text(), g.to_text());
    }
}
