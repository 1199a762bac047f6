//! One test per acceptance criterion. Each prints a PASS/FAIL line with
//! its measurements before asserting; run with `--nocapture` to see them.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;

use alphamu_core::alphamu::{best_of, choose, deepen, max_moves_left, plain_root, BridgeTable};
use alphamu_core::pbn::parse_deal;
use alphamu_core::tree::{abstract_tree_deepening, front_of, FIG_EARLY_CUT, FIG_NON_LOCALITY, FIG_PRODUCT};
use alphamu_core::worlds::{enumerate_all_worlds, is_consistent, random_deal, sample_worlds};
use alphamu_core::*;
use alphamu_harness::deals::generate_filtered_deals;
use alphamu_harness::duplicate::run_duplicate_match;
use alphamu_harness::{EngineConfig, MatchConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {n} {}: {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn front(text: &str) -> ParetoFront {
    ParetoFront::parse(text).unwrap()
}

fn v(text: &str) -> OutcomeVector {
    OutcomeVector::parse(text).unwrap()
}

#[test]
fn criterion_1_figure_fronts() {
    let mut failures = Vec::new();
    let mut check = |what: &str, got: ParetoFront, want: ParetoFront| {
        if got != want {
            failures.push(format!("{what}: {got} != {want}"));
        }
    };
    let t = Tree::parse(FIG_NON_LOCALITY).unwrap();
    let node = |l: &str| t.find(l).unwrap();
    check("non-locality root", abstract_tree_search(&t), front("{[1 0 0]}"));
    check("non-locality d", front_of(&t, node("d")), front("{[1 0 0] [0 1 1]}"));
    check("non-locality e", front_of(&t, node("e")), front("{[1 0 0]}"));
    check("non-locality b", front_of(&t, node("b")), front("{[1 0 0]}"));
    let p = Tree::parse(FIG_PRODUCT).unwrap();
    check("product root", abstract_tree_search(&p), front("{[0 0 1] [1 1 0]}"));

    let mut f = ParetoFront::from_vectors([v("[1 0 0]"), v("[0 1 1]")]);
    f.insert(v("[1 1 0]"));
    check("insertion", f, front("{[1 1 0] [0 1 1]}"));

    let e = Tree::parse(FIG_EARLY_CUT).unwrap();
    let mut tt = alphamu_core::search::TranspositionTable::new();
    let deep = abstract_tree_deepening(&e, 2, Toggles::ALL_ON, &mut tt);
    check("early-cut root", deep.last().front.clone(), abstract_tree_search(&e));
    if deep.stats.early_cuts == 0 {
        failures.push("no early cut at node c".into());
    }
    let detail = if failures.is_empty() { "all fronts exact".to_string() } else { failures.join("; ") };
    verdict(1, "figure-exact front algebra", failures.is_empty(), detail);
}

#[test]
fn criterion_2_depth_one_is_pimc() {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let mut solver = Solver::default();
    let (mut deals, mut decisions, mut mismatches) = (0, 0, Vec::new());
    for (cards, worlds, n) in [(16, 5, 10), (24, 10, 20), (36, 20, 80)] {
        deals += n;
        for (state, live) in common::decision_suite(&mut rng, cards, worlds, n) {
            decisions += 1;
            let (want, _) = pimc_choose(&state, &live, &mut solver);
            for t in Toggles::combinations() {
                let cfg = SearchConfig::new(1, live.len()).with_toggles(t);
                let got = choose(&state, &live, &cfg, &mut BridgeTable::new(), &mut solver).card;
                if got != want {
                    mismatches.push(format!("{state:?} {t}: {got} vs {want}"));
                }
            }
        }
    }
    let pass = deals >= 50 && decisions >= 1000 && mismatches.is_empty();
    verdict(
        2,
        "M=1 plays the PIMC card",
        pass,
        format!("{decisions} decisions over {deals} deals, 8 toggle sets, {} mismatches {:?}", mismatches.len(), mismatches.first()),
    );
}

#[test]
fn criterion_3_double_dummy_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let mut fast = Solver::default();
    let (mut positions, mut wrong) = (0, 0);
    for i in 0..10_000 {
        let tricks = 1 + (i % 4) as u8;
        let (world, state) = common::random_position(&mut rng, tricks);
        let want = common::minimax_tricks(&world, &state);
        if fast.max_tricks(&world, &state) != want
            || fast.double_dummy_win(&world, &state) != (want >= state.contract().required_tricks)
        {
            wrong += 1;
        }
        positions += 1;
    }
    verdict(3, "solver equals exhaustive minimax", wrong == 0, format!("{positions} positions, {wrong} disagreements"));
}

#[test]
fn criterion_4_full_depth_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let mut solver = Solver::default();
    let (mut endgames, mut by_strategies, mut wrong) = (0, 0, Vec::new());
    while endgames < 200 {
        let tricks = 2 + (endgames % 3) as u8;
        let Some((_, state, worlds)) = common::random_endgame(&mut rng, tricks, 20) else { continue };
        // every declarer pure strategy when few enough, else every outcome
        // vector those strategies produce
        let exact = match common::try_strategy_enumeration_mu(&state, &worlds, 1 << 12) {
            Some(s) => {
                by_strategies += 1;
                assert_eq!(s, common::exact_mu(&state, &worlds));
                s
            }
            None => common::exact_mu(&state, &worlds),
        };
        let m = max_moves_left(&state, &worlds[0]);
        let got = deepen(&state, &worlds, m, Toggles::ALL_ON, &mut BridgeTable::new(), &mut solver).best().1;
        if got != exact {
            wrong.push(format!("{state:?}: {got} vs {exact}"));
        }
        endgames += 1;
    }
    verdict(
        4,
        "full-depth root value is exact",
        wrong.is_empty(),
        format!("{endgames} endgames ({by_strategies} by explicit strategy enumeration), {} wrong {:?}", wrong.len(), wrong.first()),
    );
}

/// Decisions for criteria 5 and 6.
fn search_suite() -> Vec<(PlayState, Vec<World>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let mut suite = common::decision_suite(&mut rng, 24, 10, 40);
    suite.extend(common::decision_suite(&mut rng, 36, 10, 20));
    suite
}

const SUITE_DEALS: usize = 60;

#[test]
fn criterion_5_cuts_and_table_are_sound() {
    let suite = search_suite();
    let mut solver = Solver::default();
    let mut mismatches = Vec::new();
    let (mut cases, mut fewer_nodes) = (0usize, 0usize);
    let (mut calls_off, mut calls_on) = (0u64, 0u64);
    for (state, worlds) in &suite {
        for m in [2, 3] {
            let reference = best_of(&plain_root(state, m, worlds, &mut solver));
            let mut nodes = [0u64; 2];
            for t in Toggles::combinations() {
                let d = deepen(state, worlds, m, t, &mut BridgeTable::new(), &mut solver);
                let got = d.best();
                if got != reference || d.last().front.try_mu() != Some(reference.1) {
                    mismatches.push(format!("{state:?} M={m} {t}: {got:?} vs {reference:?}"));
                }
                if t == Toggles::ALL_OFF {
                    nodes[0] = d.stats.nodes();
                    calls_off += d.stats.dd_calls;
                }
                if t == Toggles::ALL_ON {
                    nodes[1] = d.stats.nodes();
                    calls_on += d.stats.dd_calls;
                }
            }
            cases += 1;
            fewer_nodes += (nodes[1] < nodes[0]) as usize;
        }
    }
    let share = fewer_nodes as f64 / cases as f64;
    let ratio = calls_off as f64 / calls_on.max(1) as f64;
    let pass = mismatches.is_empty() && share >= 0.90 && ratio >= 2.0;
    verdict(
        5,
        "toggles keep the move and value, and save work",
        pass,
        format!(
            "{} decisions x M in {{2,3}} over {SUITE_DEALS} deals; {} mismatches {:?}; fewer nodes on {:.1}% ({fewer_nodes}/{cases}); solver calls {calls_off} -> {calls_on} ({ratio:.2}x)",
            suite.len(),
            mismatches.len(),
            mismatches.first(),
            100.0 * share
        ),
    );
}

#[test]
fn criterion_6_mu_falls_with_depth() {
    let suite = search_suite();
    let mut solver = Solver::default();
    let mut rises = Vec::new();
    for (state, worlds) in &suite {
        let d = deepen(state, worlds, 3, Toggles::ALL_OFF, &mut BridgeTable::new(), &mut solver);
        for pair in d.iterations.windows(2) {
            if pair[1].mu() > pair[0].mu() {
                rises.push(format!("{state:?} M={}: {:?} > {:?}", pair[1].depth, pair[1].mu(), pair[0].mu()));
            }
        }
    }
    verdict(
        6,
        "root value never rises with depth",
        rises.is_empty(),
        format!("{} decisions, M = 1..3, {} rises {:?}", suite.len(), rises.len(), rises.first()),
    );
}

#[test]
fn criterion_7_duplicate_match_direction() {
    let config = MatchConfig {
        cards: 32,
        deals: 100,
        seed: 7,
        engines: vec![EngineConfig::alphamu(1, 10), EngineConfig::alphamu(2, 10), EngineConfig::alphamu(3, 10)],
        ..MatchConfig::default()
    };
    let (deals, stats) = generate_filtered_deals(&config, config.deals).unwrap();
    let report = run_duplicate_match(&config, &deals).unwrap();
    let base = &report.rows[0];
    let mut pass = deals.len() >= 100 && base.discrepancies == 0;
    let mut detail = format!("{} filtered deals of {} candidates, {} cards", deals.len(), stats.candidates, config.cards);
    detail += &format!("; M=1 {:.1}%", base.score_pct());
    for row in &report.rows[1..] {
        let rate = row.discrepancy_rate();
        pass &= row.score_pct() >= base.score_pct() - 3.0 && rate > 0.0 && rate < 0.10;
        detail += &format!(
            "; M={} {:.1}% with {}/{} discrepancies ({:.2}%)",
            row.engine.m,
            row.score_pct(),
            row.discrepancies,
            row.decisions,
            100.0 * rate
        );
    }
    verdict(7, "deeper search holds its score", pass, detail);
}

#[test]
fn criterion_8_sampler_statistics() {
    let mut problems = Vec::new();
    // West has led: 5 unseen West cards and 6 East cards
    let deck = Deck::with_cards(24).unwrap();
    let deal = random_deal(deck, &mut ChaCha8Rng::seed_from_u64(8008));
    let contract = Contract::new(Seat::South, 4, 6).unwrap();
    let lead = deal.hand(Seat::West).iter().next().unwrap();
    let state = PlayState::new(contract, deck).apply_move(lead);
    let view = Perspective::declarer(deal.hands(), contract, deck);
    let none = ConstraintSet::none();
    let n = 10_000;
    let worlds = sample_worlds(&state, &view, &none, n, 8).unwrap();
    let mut worst = 0.0f64;
    for tracked in (deal.hand(Seat::East) | deal.hand(Seat::West).without(lead)).iter() {
        let east = worlds.iter().filter(|w| w.hands()[Seat::East].contains(tracked)).count() as f64;
        let p = 6.0 / 11.0;
        let z = (east - n as f64 * p).abs() / (n as f64 * p * (1.0 - p)).sqrt();
        worst = worst.max(z);
    }
    let tracked = deal.hand(Seat::East).iter().next().unwrap();
    let east = worlds.iter().filter(|w| w.hands()[Seat::East].contains(tracked)).count() as f64;
    let z = (east - n as f64 * 6.0 / 11.0).abs() / (n as f64 * (6.0 / 11.0) * (5.0 / 11.0)).sqrt();
    if z > 3.0 {
        problems.push(format!("tracked card {tracked} at {z:.2} sigma"));
    }
    let inconsistent = worlds.iter().filter(|w| !is_consistent(w, &state, &none)).count();
    if inconsistent > 0 {
        problems.push(format!("{inconsistent} inconsistent worlds"));
    }

    // shown out, and an explicit void
    let d = parse_deal("N:AK.Q.J.T9 E:.JT9.A.KQ S:T9.AK.Q.J W:QJ..KT9.A").unwrap();
    let c = Contract::new(Seat::South, 3, 6).unwrap();
    let s = PlayState::new(c, d.deck())
        .apply_move("SQ".parse().unwrap())
        .apply_move("SA".parse().unwrap())
        .apply_move("HJ".parse().unwrap());
    let view = Perspective::declarer(d.hands(), c, d.deck());
    let void = ConstraintSet::none().with_void(Seat::West, Suit::Clubs);
    let start = PlayState::new(c, d.deck());
    let shown = sample_worlds(&s, &view, &none, 2000, 9).unwrap();
    let voided = sample_worlds(&start, &view, &void, 2000, 10).unwrap();
    let violations = shown.iter().filter(|w| !w.remaining(Seat::East, &s).suit(Suit::Spades).is_empty()).count()
        + voided.iter().filter(|w| !w.hands()[Seat::West].suit(Suit::Clubs).is_empty()).count();
    if violations > 0 {
        problems.push(format!("{violations} void violations"));
    }

    // sampled worlds are among the enumerated ones
    let small = Deck::with_cards(16).unwrap();
    let sd = random_deal(small, &mut ChaCha8Rng::seed_from_u64(8009));
    let sc = Contract::new(Seat::South, 3, 4).unwrap();
    let ss = PlayState::new(sc, small);
    let sv = Perspective::declarer(sd.hands(), sc, small);
    let all: HashSet<World> = enumerate_all_worlds(&ss, &sv, &none).unwrap().into_iter().collect();
    let outside = sample_worlds(&ss, &sv, &none, 1000, 11).unwrap().iter().filter(|w| !all.contains(w)).count();
    if outside > 0 {
        problems.push(format!("{outside} sampled worlds outside the enumeration"));
    }
    verdict(
        8,
        "sampler frequencies and constraints",
        problems.is_empty(),
        format!(
            "{n} samples, tracked card {z:.2} sigma (worst of 11 cards {worst:.2}), {inconsistent} inconsistent, {violations} void violations, {outside} outside enumeration"
        ),
    );
}
