//! Plays one deal: a declarer engine for North/South against PIMC
//! defenders. Each player keeps its own sample of worlds, drawn when it
//! first needs one and filtered by every card played after that.

use std::fmt::Write;
use std::time::Instant;

use alphamu_core::alphamu::{choose, BridgeTable};
use alphamu_core::worlds::{filter_worlds, sample_worlds_with};
use alphamu_core::{
    pimc_choose, Card, ConstraintSet, Contract, Deal, Perspective, PlayState, SearchStats, Seat, Solver, World,
    WorldError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{EngineConfig, EngineKind};
use crate::seeds::seat_seed;

/// Everything about a deal that is the same for every declarer engine.
#[derive(Clone, Copy, Debug)]
pub struct Table<'a> {
    pub deal: &'a Deal,
    pub contract: Contract,
    pub constraints: ConstraintSet,
    pub defense_worlds: usize,
    pub resample: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecisionRecord {
    pub seat: Seat,
    pub card: Card,
    /// The choice after one Max move of search.
    pub first_iteration: Card,
    pub forced: bool,
    /// Wall time of the engine call.
    pub micros: u64,
    pub stats: SearchStats,
}

impl DecisionRecord {
    pub fn is_discrepancy(&self) -> bool {
        !self.forced && self.card != self.first_iteration
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    pub transcript: Vec<(Seat, Card)>,
    pub declarer_tricks: u8,
    pub made: bool,
    /// One entry per North/South card.
    pub decisions: Vec<DecisionRecord>,
    /// Times a player's worlds ran out and were drawn afresh.
    pub resamples: u32,
}

impl GameRecord {
    /// Declarer decisions with more than one distinct card.
    pub fn decision_count(&self) -> usize {
        self.decisions.iter().filter(|d| !d.forced).count()
    }

    pub fn discrepancies(&self) -> usize {
        self.decisions.iter().filter(|d| d.is_discrepancy()).count()
    }

    pub fn decision_micros(&self) -> u64 {
        self.decisions.iter().filter(|d| !d.forced).map(|d| d.micros).sum()
    }

    pub fn stats(&self) -> SearchStats {
        let mut total = SearchStats::default();
        for d in &self.decisions {
            total.add(&d.stats);
        }
        total
    }

    /// Trick-by-trick listing, one trick per line.
    pub fn transcript_text(&self) -> String {
        let mut out = String::new();
        for (t, trick) in self.transcript.chunks(4).enumerate() {
            let _ = write!(out, "{:>2}:", t + 1);
            for (seat, card) in trick {
                let _ = write!(out, " {seat} {card}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "declarer {} tricks: {}", self.declarer_tricks, if self.made { "made" } else { "down" });
        out
    }
}

struct Player {
    worlds: Vec<World>,
    count: usize,
    rng: ChaCha8Rng,
    resamples: u32,
}

impl Player {
    fn new(count: usize, seed: u64) -> Player {
        Player { worlds: Vec::new(), count, rng: ChaCha8Rng::seed_from_u64(seed), resamples: 0 }
    }

    fn worlds(
        &mut self,
        state: &PlayState,
        view: &Perspective,
        constraints: &ConstraintSet,
        resample: bool,
    ) -> Result<&[World], WorldError> {
        if self.worlds.is_empty() || resample {
            self.worlds = sample_worlds_with(state, view, constraints, self.count, &mut self.rng)?;
        }
        Ok(&self.worlds)
    }

    /// Keeps the worlds where `card` was possible from `before`. An empty
    /// result forces a fresh sample at the next decision.
    fn observe(&mut self, card: Card, before: &PlayState, who: &str) {
        if self.worlds.is_empty() {
            return;
        }
        match filter_worlds(&self.worlds, card, before) {
            Ok(w) => self.worlds = w,
            Err(_) => {
                log::info!("{who}: no world allows {card} after {} cards; resampling", before.moves_played());
                self.worlds.clear();
                self.resamples += 1;
            }
        }
    }

    fn forget(&mut self) {
        self.worlds.clear();
    }
}

/// Plays `table.deal` to the end. `seed` is the deal seed; the defenders'
/// sampling depends on it and their seat only, so every declarer engine
/// meets the same defense.
pub fn play_deal(table: &Table<'_>, engine: &EngineConfig, seed: u64) -> Result<GameRecord, WorldError> {
    let contract = table.contract;
    let deck = table.deal.deck();
    let hands = table.deal.hands();
    let truth = World::new(*hands);
    let mut state = PlayState::new(contract, deck);
    let declarer_view = Perspective::declarer(hands, contract, deck);
    let defenders = [contract.declarer.next(), contract.dummy().next()];
    let mut declarer = Player::new(engine.worlds, seat_seed(seed, contract.declarer));
    let mut defense: Vec<Player> =
        defenders.iter().map(|&s| Player::new(table.defense_worlds, seat_seed(seed, s))).collect();
    let mut solver = Solver::default();
    let mut tt = BridgeTable::new();
    let mut decisions = Vec::new();
    let search = engine.search_config();

    while !state.is_over() {
        let seat = state.to_move();
        let card = if state.is_declarer_side_to_move() {
            let worlds = declarer.worlds(&state, &declarer_view, &table.constraints, table.resample)?;
            let calls = solver.stats().calls;
            let start = Instant::now();
            let (card, first, forced, mut stats) = match engine.engine {
                EngineKind::Pimc => {
                    let (card, scores) = pimc_choose(&state, worlds, &mut solver);
                    let stats = SearchStats { dd_calls: solver.stats().calls - calls, ..SearchStats::default() };
                    (card, card, scores.is_empty(), stats)
                }
                EngineKind::Alphamu => {
                    let d = choose(&state, worlds, &search, &mut tt, &mut solver);
                    let first = d.first_iteration().unwrap_or(d.card);
                    (d.card, first, d.is_forced(), d.stats)
                }
            };
            let micros = start.elapsed().as_micros() as u64;
            stats.elapsed_micros = micros;
            decisions.push(DecisionRecord { seat, card, first_iteration: first, forced, micros, stats });
            card
        } else {
            let k = defenders.iter().position(|&s| s == seat).expect("a defender");
            // before the opening lead dummy is still hidden
            let view = if state.moves_played() == 0 {
                let mut known = [None; 4];
                known[seat.index()] = Some(hands[seat]);
                Perspective { universe: deck.cards(), known }
            } else {
                Perspective::defender(seat, hands, contract, deck)
            };
            let worlds = defense[k].worlds(&state, &view, &table.constraints, table.resample)?;
            pimc_choose(&state, worlds, &mut solver).0
        };
        debug_assert!(truth.remaining(seat, &state).contains(card));
        declarer.observe(card, &state, "declarer");
        for (p, s) in defense.iter_mut().zip(defenders) {
            p.observe(card, &state, if s == Seat::East { "east" } else { "west" });
        }
        if state.moves_played() == 0 {
            // dummy comes down: the leader's worlds were drawn without it
            defense.iter_mut().for_each(Player::forget);
        }
        state = state.apply_move(card);
    }
    Ok(GameRecord {
        transcript: state.history().collect(),
        declarer_tricks: state.declarer_tricks(),
        made: state.declarer_tricks() >= contract.required_tricks,
        decisions,
        resamples: declarer.resamples + defense.iter().map(|p| p.resamples).sum::<u32>(),
    })
}
