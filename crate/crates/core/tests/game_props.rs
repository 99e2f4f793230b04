mod common;

use proptest::prelude::*;

use common::{formula, game_partition, GAME_ATOMS};
use ltlfsynt::game::{realizability, solve, solve_offline, GameSolver, Mode, Player, SolveOptions};
use ltlfsynt::ltlf::Semantics;
use ltlfsynt::oracle::{explicit_realizable, random_arena, rng, ArenaEvent};

fn incremental(events: &[ArenaEvent]) -> GameSolver<usize> {
    let mut g = GameSolver::new();
    for &e in events {
        match e {
            ArenaEvent::Vertex(v, owner) => g.new_vertex(v, owner).unwrap(),
            ArenaEvent::Edge(s, d) => g.new_edge(s, d).unwrap(),
            ArenaEvent::Freeze(v) => g.freeze_vertex(v).unwrap(),
            ArenaEvent::Target(v) => g.set_winner(v, Player::Output).unwrap(),
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incremental_solving_matches_the_attractor(seed in any::<u64>()) {
        let (arena, events) = random_arena(&mut rng(seed), 60);
        let g = incremental(&events);
        let offline = solve_offline(&arena);
        let mut determinations = 0;
        for v in 0..arena.len() {
            prop_assert_eq!(g.winner(v) == Some(Player::Output), offline.output_wins(v));
            determinations += g.winner(v).is_some() as usize;
            // A frozen vertex left open still has an open successor.
            if g.winner(v).is_none() {
                prop_assert!(g.pending(v).unwrap() >= 1);
            }
        }
        prop_assert_eq!(g.num_determined(), determinations);
    }

    #[test]
    fn verdicts_match_the_explicit_game(f in formula(GAME_ATOMS, 5), moore in any::<bool>()) {
        let sem = if moore { Semantics::Moore } else { Semantics::Mealy };
        let part = game_partition();
        let expected = explicit_realizable(f, &part, sem).unwrap();
        for mode in [Mode::Bfs, Mode::Full] {
            for one_step in [false, true] {
                for early_exit in [false, true] {
                    let opts = SolveOptions { mode, one_step, early_exit, ..SolveOptions::default() };
                    prop_assert_eq!(realizability(f, &part, sem, &opts).unwrap().is_realizable(), expected);
                }
            }
        }
    }

    #[test]
    fn moore_realizable_implies_mealy_realizable(f in formula(GAME_ATOMS, 5)) {
        let part = game_partition();
        let opts = SolveOptions::default();
        if realizability(f, &part, Semantics::Moore, &opts).unwrap().is_realizable() {
            prop_assert!(realizability(f, &part, Semantics::Mealy, &opts).unwrap().is_realizable());
        }
    }

    #[test]
    fn extracted_strategies_satisfy_the_specification(f in formula(GAME_ATOMS, 5), moore in any::<bool>()) {
        let sem = if moore { Semantics::Moore } else { Semantics::Mealy };
        let mut solved = solve(f, &game_partition(), sem, &SolveOptions::default()).unwrap();
        if solved.result.is_realizable() {
            let m = solved.strategy().unwrap();
            prop_assert!(m.verify(f, 5_000).unwrap() > 0);
            if moore {
                prop_assert!(m.is_moore());
            }
        }
    }
}
