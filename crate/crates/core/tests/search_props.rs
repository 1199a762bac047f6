mod common;

use alphamu_core::alphamu::{
    alphamu, alphamu_plain, best_of, choose, deepen, plain_root, root_moves, BridgeSpace, BridgeTable,
};
use alphamu_core::pareto::{first_worlds, ParetoFront};
use alphamu_core::pbn::parse_hands;
use alphamu_core::pimc::{pimc_choose, pimc_choose_with};
use alphamu_core::search::{self, SearchConfig, SearchStats, Toggles};
use alphamu_core::worlds::sample_worlds;
use alphamu_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn suite(seed: u64, cards: usize, worlds: usize, deals: usize) -> Vec<(PlayState, Vec<World>)> {
    common::decision_suite(&mut ChaCha8Rng::seed_from_u64(seed), cards, worlds, deals)
}

#[test]
fn depth_one_is_pimc() {
    let mut solver = Solver::default();
    for (state, worlds) in suite(1, 24, 10, 6) {
        let (want, _) = pimc_choose(&state, &worlds, &mut solver);
        for t in Toggles::combinations() {
            let cfg = SearchConfig::new(1, worlds.len()).with_toggles(t);
            let d = choose(&state, &worlds, &cfg, &mut BridgeTable::new(), &mut solver);
            assert_eq!(d.card, want, "{state:?} {t}");
        }
    }
}

#[test]
fn toggles_do_not_change_the_answer() {
    let mut solver = Solver::default();
    for (state, worlds) in suite(2, 24, 8, 4) {
        for m in [2, 3] {
            let reference = best_of(&plain_root(&state, m, &worlds, &mut solver));
            for t in Toggles::combinations() {
                let d = deepen(&state, &worlds, m, t, &mut BridgeTable::new(), &mut solver);
                assert_eq!(d.best(), reference, "{state:?} M={m} {t}");
                assert_eq!(d.last().front.try_mu(), Some(reference.1));
            }
        }
    }
}

#[test]
fn mu_never_rises_with_depth() {
    let mut solver = Solver::default();
    for (state, worlds) in suite(3, 24, 8, 4) {
        let d = deepen(&state, &worlds, 4, Toggles::ALL_OFF, &mut BridgeTable::new(), &mut solver);
        for pair in d.iterations.windows(2) {
            assert!(pair[1].mu() <= pair[0].mu(), "{state:?}");
            // also move by move
            for ((a, fa), (b, fb)) in pair[0].move_fronts.iter().zip(&pair[1].move_fronts) {
                assert_eq!(a, b);
                assert!(fb.leq(fa));
            }
        }
    }
}

#[test]
fn warm_table_gives_the_same_result() {
    let mut solver = Solver::default();
    for (state, worlds) in suite(4, 24, 8, 3) {
        let mut tt = BridgeTable::new();
        let cfg = SearchConfig::new(3, worlds.len());
        let cold = choose(&state, &worlds, &cfg, &mut tt, &mut solver);
        let warm = choose(&state, &worlds, &cfg, &mut tt, &mut solver);
        assert_eq!((cold.card, cold.mu), (warm.card, warm.mu));

        let mut stats = SearchStats::default();
        let a = alphamu(&state, 2, &worlds, &ParetoFront::empty(), &mut tt, &mut solver, &mut stats);
        let b = alphamu(&state, 2, &worlds, &ParetoFront::empty(), &mut tt, &mut solver, &mut stats);
        assert_eq!(a, b);
        assert_eq!(a, alphamu_plain(&state, 2, &worlds, &mut solver));
    }
}

#[test]
fn table_is_cleared_for_new_worlds() {
    let mut solver = Solver::default();
    let cases = suite(5, 24, 8, 2);
    let mut tt = BridgeTable::new();
    for (state, worlds) in &cases {
        let cfg = SearchConfig::new(2, worlds.len());
        let shared = choose(state, worlds, &cfg, &mut tt, &mut solver);
        let fresh = choose(state, worlds, &cfg, &mut BridgeTable::new(), &mut solver);
        assert_eq!((shared.card, shared.mu), (fresh.card, fresh.mu));
    }
}

#[test]
fn collapsing_equivalent_cards_is_safe() {
    let mut solver = Solver::default();
    for (state, worlds) in suite(6, 24, 8, 4) {
        let (a, sa) = pimc_choose_with(&state, &worlds, &mut solver, true);
        let (b, sb) = pimc_choose_with(&state, &worlds, &mut solver, false);
        let norm = RankNormalization::new(&state, worlds.iter().map(World::hands));
        assert!(a == b || norm.equivalent(a, b), "{a} vs {b}");
        let best = |s: &[alphamu_core::MoveScore]| s.iter().map(|m| m.score()).max();
        assert_eq!(best(&sa), best(&sb));

        let all = first_worlds(worlds.len());
        let with = search::alphamu_plain(&mut BridgeSpace::new(&worlds, &mut solver), &state, 2, all);
        let without =
            search::alphamu_plain(&mut BridgeSpace::new(&worlds, &mut solver).without_collapse(), &state, 2, all);
        assert_eq!(with, without);
    }
}

#[test]
fn forced_card_needs_no_search() {
    // South, on lead, holds only spades: AK are touching, so one class
    let hands = parse_hands("N:Q..A. E:.K.K. S:AK... W:.A..A").unwrap();
    let contract = Contract::new(Seat::South, 1, 2).unwrap();
    let state = PlayState::from_position(contract, 2, Seat::South, 0, 0);
    let worlds = vec![World::new(hands)];
    assert_eq!(root_moves(&state, &worlds).len(), 1);
    let mut solver = Solver::default();
    let d = choose(&state, &worlds, &SearchConfig::new(3, 1), &mut BridgeTable::new(), &mut solver);
    assert!(d.is_forced());
    assert_eq!(d.card, "SA".parse().unwrap());
    assert_eq!(solver.stats().calls, 0);
    assert_eq!(d.stats, SearchStats::default());
}

#[test]
fn touching_honours_are_searched_once() {
    // KQ in South touch; the J sits with a defender in some worlds
    let hands = parse_hands("N:A2... E:J3... S:KQ... W:T9...").unwrap();
    let contract = Contract::new(Seat::South, 1, 2).unwrap();
    let state = PlayState::from_position(contract, 2, Seat::South, 0, 0);
    let worlds = vec![World::new(hands)];
    let reps = root_moves(&state, &worlds);
    assert_eq!(reps.len(), 1);
}

#[test]
fn root_cut_is_visible_in_the_stats() {
    let mut solver = Solver::default();
    let mut cuts = 0;
    for (state, worlds) in suite(7, 24, 8, 4) {
        let cfg = SearchConfig::new(3, worlds.len());
        cuts += choose(&state, &worlds, &cfg, &mut BridgeTable::new(), &mut solver).stats.root_cuts;
        let off = SearchConfig::new(3, worlds.len()).with_toggles(Toggles { root_cut: false, ..Toggles::ALL_ON });
        assert_eq!(choose(&state, &worlds, &off, &mut BridgeTable::new(), &mut solver).stats.root_cuts, 0);
    }
    assert!(cuts > 0);
}

/// Declarer's four spades need a guess of the queen, yet with every world
/// visible the guess is always right.
#[test]
fn strategy_fusion_hand() {
    let hands = parse_hands("N:KJT7... E:Q5.2.3. S:A986... W:4.3.2.5").unwrap();
    let contract = Contract::new(Seat::South, 4, 4).unwrap();
    let state = PlayState::from_position(contract, 4, Seat::South, 0, 0);
    let mut known = [None; 4];
    known[Seat::North.index()] = Some(hands[Seat::North]);
    known[Seat::South.index()] = Some(hands[Seat::South]);
    let view = Perspective { universe: hands.all(), known };
    let worlds = sample_worlds(&state, &view, &ConstraintSet::none(), 24, 3).unwrap();
    let queen: Card = "SQ".parse().unwrap();
    assert!(worlds.iter().any(|w| w.hands()[Seat::East].contains(queen)));
    assert!(worlds.iter().any(|w| w.hands()[Seat::West].contains(queen)));

    let mut solver = Solver::default();
    let (_, scores) = pimc_choose(&state, &worlds, &mut solver);
    assert!(scores.iter().any(|s| s.wins == s.worlds && s.worlds == worlds.len() as u32));

    let deep = choose(&state, &worlds, &SearchConfig::new(8, worlds.len()), &mut BridgeTable::new(), &mut solver);
    let pimc_mu = deep.iterations[0].mu;
    assert_eq!(pimc_mu, alphamu_core::Score::new(24, 24));
    assert!(deep.mu.unwrap() < pimc_mu, "{:?}", deep.mu);
    assert_eq!(deep.mu.unwrap(), common::exact_mu(&state, &worlds));
}
