//! Brute-force references shared by the integration tests. Nothing here is
//! clever: no alpha cuts, no tables, no card equivalence.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use alphamu_core::cards::legal_moves;
use alphamu_core::pareto::Score;
use alphamu_core::worlds::{enumerate_all_worlds, legal_moves_in_world, random_hands};
use alphamu_core::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Tricks the declarer side takes from `state` with best play by all,
/// counting tricks already won.
pub fn minimax_tricks(world: &World, state: &PlayState) -> u8 {
    if state.is_over() {
        return state.declarer_tricks();
    }
    let max = state.is_declarer_side_to_move();
    let moves = legal_moves_in_world(state, world);
    let vals = moves.iter().map(|c| minimax_tricks(world, &state.apply_move(c)));
    if max {
        vals.max().unwrap()
    } else {
        vals.min().unwrap()
    }
}

pub fn minimax_win(world: &World, state: &PlayState) -> bool {
    minimax_tricks(world, state) >= state.contract().required_tricks
}

fn decided(state: &PlayState) -> Option<bool> {
    let req = state.contract().required_tricks;
    if state.declarer_tricks() >= req {
        Some(true)
    } else if state.defense_tricks() > state.total_tricks() - req {
        Some(false)
    } else {
        None
    }
}

/// Drops vectors whose won worlds are a subset of another's. `a & b` is
/// monotone, so the best vectors at the root are unchanged.
fn maximal(set: HashSet<u64>) -> HashSet<u64> {
    set.iter().copied().filter(|&a| !set.iter().any(|&b| b != a && a & b == a)).collect()
}

/// The maximal outcome vectors declarer pure strategies achieve against a
/// defense that sees the world.
pub fn outcome_set(state: &PlayState, worlds: &[World], mask: u64) -> HashSet<u64> {
    if let Some(won) = decided(state) {
        return HashSet::from([if won { mask } else { 0 }]);
    }
    let live: Vec<usize> = (0..worlds.len()).filter(|i| mask & (1 << i) != 0).collect();
    if state.is_declarer_side_to_move() {
        let hand = worlds[live[0]].remaining(state.to_move(), state);
        let mut out = HashSet::new();
        for c in legal_moves(state, hand).iter() {
            out.extend(outcome_set(&state.apply_move(c), worlds, mask));
        }
        maximal(out)
    } else {
        let mut per_move: Vec<(Card, u64)> = Vec::new();
        for &i in &live {
            for c in legal_moves_in_world(state, &worlds[i]).iter() {
                match per_move.iter_mut().find(|(m, _)| *m == c) {
                    Some(e) => e.1 |= 1 << i,
                    None => per_move.push((c, 1 << i)),
                }
            }
        }
        // a world where a move is impossible does not constrain it
        let mut acc: HashSet<u64> = HashSet::from([mask]);
        for (c, w1) in per_move {
            let child = outcome_set(&state.apply_move(c), worlds, w1);
            let mut next = HashSet::new();
            for &a in &acc {
                for &b in &child {
                    next.insert(a & (b | (mask & !w1)));
                }
            }
            acc = maximal(next);
        }
        acc
    }
}

/// Best strategy's winning ratio over all `worlds`.
pub fn exact_mu(state: &PlayState, worlds: &[World]) -> Score {
    let mask = if worlds.len() == 64 { u64::MAX } else { (1u64 << worlds.len()) - 1 };
    let set = outcome_set(state, worlds, mask);
    let best = set.iter().map(|v| v.count_ones()).max().unwrap();
    Score::new(best, worlds.len() as u32)
}

/// Declarer information sets reachable from `state`, with their moves.
struct InfoSets {
    sets: Vec<(PlayState, Vec<Card>)>,
    index: HashMap<PlayState, usize>,
    visited: HashSet<(PlayState, u64)>,
    strategies: u64,
    limit: u64,
}

impl InfoSets {
    /// False once the strategy count passes the limit.
    fn collect(&mut self, state: &PlayState, worlds: &[World], mask: u64) -> bool {
        if decided(state).is_some() || !self.visited.insert((*state, mask)) {
            return true;
        }
        let live: Vec<usize> = (0..worlds.len()).filter(|i| mask & (1 << i) != 0).collect();
        if state.is_declarer_side_to_move() {
            let hand = worlds[live[0]].remaining(state.to_move(), state);
            let moves: Vec<Card> = legal_moves(state, hand).iter().collect();
            // the same public state can be reached under different world masks
            if !self.index.contains_key(state) {
                self.strategies = self.strategies.saturating_mul(moves.len() as u64);
                if self.strategies > self.limit {
                    return false;
                }
                self.index.insert(*state, self.sets.len());
                self.sets.push((*state, moves.clone()));
            }
            moves.iter().all(|&c| self.collect(&state.apply_move(c), worlds, mask))
        } else {
            let mut seen = CardSet::EMPTY;
            for &i in &live {
                seen |= legal_moves_in_world(state, &worlds[i]);
            }
            seen.iter().all(|c| {
                let w1 = live
                    .iter()
                    .filter(|&&i| legal_moves_in_world(state, &worlds[i]).contains(c))
                    .fold(0u64, |a, &i| a | 1 << i);
                self.collect(&state.apply_move(c), worlds, w1)
            })
        }
    }
}

fn play_strategy(state: &PlayState, world: &World, strategy: &HashMap<PlayState, Card>) -> bool {
    if let Some(won) = decided(state) {
        return won;
    }
    if state.is_declarer_side_to_move() {
        play_strategy(&state.apply_move(strategy[state]), world, strategy)
    } else {
        legal_moves_in_world(state, world)
            .iter()
            .all(|c| play_strategy(&state.apply_move(c), world, strategy))
    }
}

/// Explicit enumeration of every declarer pure strategy (a card for each
/// information set), each scored world by world against a defense that
/// sees the world. Exponential; tiny endgames only.
pub fn strategy_enumeration_mu(state: &PlayState, worlds: &[World]) -> Score {
    try_strategy_enumeration_mu(state, worlds, 1 << 16).expect("too many strategies to enumerate")
}

/// As [`strategy_enumeration_mu`], or `None` when there are more than
/// `limit` pure strategies.
pub fn try_strategy_enumeration_mu(state: &PlayState, worlds: &[World], limit: u64) -> Option<Score> {
    let mask = if worlds.len() == 64 { u64::MAX } else { (1u64 << worlds.len()) - 1 };
    let mut info = InfoSets { sets: Vec::new(), index: HashMap::new(), visited: HashSet::new(), strategies: 1, limit };
    if !info.collect(state, worlds, mask) {
        return None;
    }
    let sets = info.sets;
    let mut choice = vec![0usize; sets.len()];
    let mut best = 0;
    loop {
        let strategy: HashMap<PlayState, Card> = sets.iter().zip(&choice).map(|((s, m), &i)| (*s, m[i])).collect();
        let wins = worlds.iter().filter(|w| play_strategy(state, w, &strategy)).count() as u32;
        best = best.max(wins);
        // odometer
        let mut k = 0;
        loop {
            if k == sets.len() {
                return Some(Score::new(best, worlds.len() as u32));
            }
            choice[k] += 1;
            if choice[k] < sets[k].1.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// A random position with `tricks` tricks left out of a 52-card deck,
/// possibly part-way through the first of them.
pub fn random_position<R: Rng>(rng: &mut R, tricks: u8) -> (World, PlayState) {
    let mut all: Vec<Card> = Deck::STANDARD.cards().iter().collect();
    all.shuffle(rng);
    let cards: CardSet = all[..4 * tricks as usize].iter().copied().collect();
    let hands = random_hands(cards, rng);
    let declarer = Seat::from_index(rng.gen_range(0..4));
    let required = rng.gen_range(1..=tricks);
    let contract = Contract::new(declarer, required, tricks).unwrap();
    let leader = Seat::from_index(rng.gen_range(0..4));
    let world = World::new(hands);
    let mut state = PlayState::from_position(contract, tricks, leader, 0, 0);
    for _ in 0..rng.gen_range(0..4) {
        let legal: Vec<Card> = legal_moves_in_world(&state, &world).iter().collect();
        state = state.apply_move(*legal.choose(rng).unwrap());
    }
    (world, state)
}

/// Declarer-side endgame (North/South declaring, South declarer) with the
/// declarer side on play and every hidden layout enumerated. `None` when
/// the layouts are too many.
pub fn random_endgame<R: Rng>(rng: &mut R, tricks: u8, limit: usize) -> Option<(World, PlayState, Vec<World>)> {
    let mut all: Vec<Card> = Deck::STANDARD.cards().iter().collect();
    all.shuffle(rng);
    let cards: CardSet = all[..4 * tricks as usize].iter().copied().collect();
    let hands = random_hands(cards, rng);
    let contract = Contract::new(Seat::South, rng.gen_range(1..=tricks), tricks).unwrap();
    let leader = Seat::from_index(rng.gen_range(0..4));
    let truth = World::new(hands);
    let mut state = PlayState::from_position(contract, tricks, leader, 0, 0);
    while !state.is_declarer_side_to_move() {
        let legal: Vec<Card> = legal_moves_in_world(&state, &truth).iter().collect();
        state = state.apply_move(*legal.choose(rng).unwrap());
    }
    let mut known = [None; 4];
    known[Seat::North.index()] = Some(hands[Seat::North]);
    known[Seat::South.index()] = Some(hands[Seat::South]);
    let view = Perspective { universe: cards, known };
    let mut constraints = ConstraintSet::none();
    let mut worlds = enumerate_all_worlds(&state, &view, &constraints).ok()?;
    // tighten East's high-card range around the truth until few enough remain
    let east_hcp = hands[Seat::East].hcp();
    let mut slack = 10u32;
    while worlds.len() > limit {
        if slack == 0 {
            return None;
        }
        slack -= 1;
        constraints.seats[Seat::East.index()].hcp = (east_hcp.saturating_sub(slack), east_hcp + slack);
        worlds = enumerate_all_worlds(&state, &view, &constraints).ok()?;
    }
    (worlds.len() >= 2).then_some((truth, state, worlds))
}

/// A random full deal of `cards` cards, South declaring and West on lead,
/// with `worlds` declarer worlds sampled without auction constraints.
pub fn random_game<R: Rng>(rng: &mut R, cards: usize, worlds: usize) -> (Deal, PlayState, Vec<World>) {
    let deck = Deck::with_cards(cards).unwrap();
    let deal = alphamu_core::worlds::random_deal(deck, rng);
    let total = deck.total_tricks();
    let required = ((9 * total as u32 + 6) / 13) as u8;
    let contract = Contract::new(Seat::South, required, total).unwrap();
    let state = PlayState::new(contract, deck);
    let view = Perspective::declarer(deal.hands(), contract, deck);
    let sample = alphamu_core::worlds::sample_worlds(&state, &view, &ConstraintSet::none(), worlds, rng.gen()).unwrap();
    (deal, state, sample)
}

/// Declarer decisions (more than one distinct card) met while PIMC plays
/// every seat of random deals: the declarer from its sampled worlds, the
/// defenders seeing the deal. Worlds are filtered after each card and
/// resampled if none survive.
pub fn decision_suite<R: Rng>(rng: &mut R, cards: usize, worlds: usize, deals: usize) -> Vec<(PlayState, Vec<World>)> {
    use alphamu_core::worlds::{filter_worlds, sample_worlds};
    let mut out = Vec::new();
    let mut solver = Solver::default();
    for _ in 0..deals {
        let (deal, mut state, mut live) = random_game(rng, cards, worlds);
        let contract = state.contract();
        let view = Perspective::declarer(deal.hands(), contract, deal.deck());
        let truth = [World::new(*deal.hands())];
        while !state.is_over() {
            let card = if state.is_declarer_side_to_move() {
                if alphamu_core::alphamu::root_moves(&state, &live).len() > 1 {
                    out.push((state, live.clone()));
                }
                pimc_choose(&state, &live, &mut solver).0
            } else {
                pimc_choose(&state, &truth, &mut solver).0
            };
            let next = state.apply_move(card);
            live = match filter_worlds(&live, card, &state) {
                Ok(w) => w,
                Err(_) => sample_worlds(&next, &view, &ConstraintSet::none(), worlds, rng.gen()).unwrap(),
            };
            state = next;
        }
    }
    out
}
