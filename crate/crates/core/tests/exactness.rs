mod common;

use alphamu_core::alphamu::{choose, deepen, max_moves_left, BridgeTable};
use alphamu_core::search::{SearchConfig, Toggles};
use alphamu_core::Solver;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn set_oracle_matches_strategy_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let Some((_, state, worlds)) = common::random_endgame(&mut rng, 2, 12) else { continue };
        assert_eq!(common::exact_mu(&state, &worlds), common::strategy_enumeration_mu(&state, &worlds));
        checked += 1;
    }
}

#[test]
fn full_depth_search_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut solver = Solver::default();
    let mut checked = 0;
    while checked < 60 {
        let tricks = rng.gen_range(2..=4);
        let Some((_, state, worlds)) = common::random_endgame(&mut rng, tricks, 20) else { continue };
        let depth = max_moves_left(&state, &worlds[0]);
        let want = common::exact_mu(&state, &worlds);
        for toggles in [Toggles::ALL_OFF, Toggles::ALL_ON] {
            let mut tt = BridgeTable::new();
            let d = deepen(&state, &worlds, depth, toggles, &mut tt, &mut solver);
            assert_eq!(d.best().1, want, "{state:?} {toggles}");
        }
        // the driver caps the depth itself
        let cfg = SearchConfig::new(50, worlds.len());
        let d = choose(&state, &worlds, &cfg, &mut BridgeTable::new(), &mut solver);
        if let Some(mu) = d.mu {
            assert_eq!(mu, want);
        }
        checked += 1;
    }
}
