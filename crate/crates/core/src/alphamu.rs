//! αμ for declarer play: the Bridge [`SearchSpace`] and the per-decision
//! driver.

use alloc::vec::Vec;

use crate::cards::{legal_moves, Card, CardSet, PlayState, RankNormalization};
use crate::dds::{hands_hash, Solver};
use crate::pareto::{first_worlds, OutcomeVector, ParetoFront, Score, MAX_WORLDS};
use crate::search::{self, Deepening, NodeOptions, SearchConfig, SearchSpace, SearchStats, Toggles, TranspositionTable};
use crate::worlds::{legal_moves_in_world, World};

/// Node identity for the transposition table: who played what, the trick
/// in progress and the trick score. The order of plays inside completed
/// tricks is irrelevant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BridgeKey {
    played_by: [u64; 4],
    trick: u64,
    leader: u8,
    trick_len: u8,
    declarer_tricks: u8,
}

impl BridgeKey {
    pub fn of(state: &PlayState) -> BridgeKey {
        let mut played_by = [0; 4];
        for seat in crate::cards::Seat::ALL {
            played_by[seat.index()] = state.played_by(seat).bits();
        }
        BridgeKey {
            played_by,
            trick: state.current_trick_cards().bits(),
            leader: state.leader() as u8,
            trick_len: state.current_trick().len() as u8,
            declarer_tricks: state.declarer_tricks(),
        }
    }
}

pub type BridgeTable = TranspositionTable<BridgeKey, Card>;

/// Identifies a world list for [`TranspositionTable::prepare`].
pub fn worlds_tag(worlds: &[World]) -> u64 {
    worlds.iter().enumerate().fold(worlds.len() as u64, |acc, (i, w)| {
        (acc ^ hands_hash(w.hands()).rotate_left(i as u32 % 64)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    })
}

/// Declarer play over a list of at most 64 worlds. Max is the declarer
/// side; the defenders see the world.
pub struct BridgeSpace<'a> {
    worlds: &'a [World],
    solver: &'a mut Solver,
    /// Search one card per class of equivalent Max cards.
    collapse: bool,
}

impl<'a> BridgeSpace<'a> {
    pub fn new(worlds: &'a [World], solver: &'a mut Solver) -> BridgeSpace<'a> {
        assert!(!worlds.is_empty(), "no world");
        assert!(worlds.len() <= MAX_WORLDS, "at most {MAX_WORLDS} worlds");
        BridgeSpace { worlds, solver, collapse: true }
    }

    /// Turns off the collapse of equivalent Max cards below the root.
    pub fn without_collapse(mut self) -> Self {
        self.collapse = false;
        self
    }

    pub fn all_worlds(&self) -> u64 {
        first_worlds(self.worlds.len())
    }

    fn masked(&self, worlds: u64) -> impl Iterator<Item = (usize, &World)> + '_ {
        self.worlds.iter().enumerate().filter(move |(i, _)| worlds & (1 << i) != 0)
    }
}

impl SearchSpace for BridgeSpace<'_> {
    type Node = PlayState;
    type Move = Card;
    type Key = BridgeKey;

    fn is_max(&self, node: &PlayState) -> bool {
        node.is_declarer_side_to_move()
    }

    fn key(&self, node: &PlayState) -> BridgeKey {
        BridgeKey::of(node)
    }

    fn decided(&mut self, node: &PlayState, worlds: u64) -> Option<OutcomeVector> {
        let required = node.contract().required_tricks;
        if node.declarer_tricks() >= required {
            Some(OutcomeVector::all_won(worlds))
        } else if node.defense_tricks() > node.total_tricks() - required {
            Some(OutcomeVector::all_lost(worlds))
        } else {
            None
        }
    }

    fn evaluate(&mut self, node: &PlayState, worlds: u64) -> OutcomeVector {
        let mut values = 0;
        for i in 0..self.worlds.len() {
            if worlds & (1 << i) != 0 && self.solver.double_dummy_win(&self.worlds[i], node) {
                values |= 1 << i;
            }
        }
        OutcomeVector::new(values, worlds)
    }

    fn moves(&mut self, node: &PlayState, worlds: u64, out: &mut Vec<(Card, u64)>) {
        out.clear();
        if self.is_max(node) {
            let first = worlds.trailing_zeros() as usize;
            let mut legal = legal_moves_in_world(node, &self.worlds[first]);
            if self.collapse && legal.len() > 1 {
                let norm = RankNormalization::new(node, self.masked(worlds).map(|(_, w)| w.hands()));
                legal = norm.representatives(legal);
            }
            out.extend(legal.iter().map(|c| (c, worlds)));
        } else {
            let mut masks = [0u64; 64];
            let mut union = CardSet::EMPTY;
            for (i, w) in self.masked(worlds) {
                let legal = legal_moves_in_world(node, w);
                union |= legal;
                for c in legal.iter() {
                    masks[c.index() as usize] |= 1 << i;
                }
            }
            out.extend(union.iter().map(|c| (c, masks[c.index() as usize])));
        }
    }

    fn play(&self, node: &PlayState, mv: Card) -> PlayState {
        node.apply_move(mv)
    }
}

/// Root moves of a Max decision: the legal cards, one per class of
/// equivalent cards, canonical order.
pub fn root_moves(state: &PlayState, worlds: &[World]) -> CardSet {
    assert!(state.is_declarer_side_to_move(), "declarer side must be on play");
    let hand = worlds[0].remaining(state.to_move(), state);
    debug_assert!(worlds.iter().all(|w| w.remaining(state.to_move(), state) == hand));
    let legal = legal_moves(state, hand);
    RankNormalization::new(state, worlds.iter().map(World::hands)).representatives(legal)
}

/// Max moves left in the hand: each declarer-side card is one.
pub fn max_moves_left(state: &PlayState, world: &World) -> u32 {
    let c = state.contract();
    (world.remaining(c.declarer, state).len() + world.remaining(c.dummy(), state).len()) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationSummary {
    pub depth: u32,
    pub best: Card,
    pub mu: Score,
    pub root_cut: bool,
}

/// Outcome of one declarer decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub card: Card,
    /// Root μ of the deepest iteration; `None` for a forced card.
    pub mu: Option<Score>,
    pub iterations: Vec<IterationSummary>,
    pub stats: SearchStats,
}

impl Decision {
    /// Best move of the one-Max-move iteration.
    pub fn first_iteration(&self) -> Option<Card> {
        self.iterations.first().map(|i| i.best)
    }

    pub fn is_forced(&self) -> bool {
        self.iterations.is_empty()
    }
}

/// Chooses the declarer side's card by iterative deepening up to
/// `config.max_depth` Max moves (capped at the Max moves left in the hand,
/// beyond which deeper iterations cannot differ).
pub fn choose(
    state: &PlayState,
    worlds: &[World],
    config: &SearchConfig,
    tt: &mut BridgeTable,
    solver: &mut Solver,
) -> Decision {
    let reps = root_moves(state, worlds);
    let calls_before = solver.stats().calls;
    if reps.len() == 1 {
        let card = reps.iter().next().expect("one card");
        return Decision { card, mu: None, iterations: Vec::new(), stats: SearchStats::default() };
    }
    let depth = config.max_depth.min(max_moves_left(state, &worlds[0])).max(1);
    let deep = deepen(state, worlds, depth, config.toggles(), tt, solver);
    debug_assert_eq!(solver.stats().calls - calls_before, deep.stats.dd_calls);
    let iterations = deep
        .iterations
        .iter()
        .map(|r| {
            let (best, mu) = r.best().expect("root front is never empty");
            IterationSummary { depth: r.depth, best, mu, root_cut: r.root_cut }
        })
        .collect::<Vec<_>>();
    let last = *iterations.last().expect("at least one iteration");
    Decision { card: last.best, mu: Some(last.mu), iterations, stats: deep.stats }
}

/// The driver's signature in its simplest form.
pub fn iterative_deepening_choose(
    state: &PlayState,
    worlds: &[World],
    config: &SearchConfig,
    tt: &mut BridgeTable,
    solver: &mut Solver,
) -> (Card, SearchStats) {
    let d = choose(state, worlds, config, tt, solver);
    (d.card, d.stats)
}

/// Every iteration `1..=depth` at a Max root, without the forced-move
/// shortcut or the depth cap.
pub fn deepen(
    state: &PlayState,
    worlds: &[World],
    depth: u32,
    toggles: Toggles,
    tt: &mut BridgeTable,
    solver: &mut Solver,
) -> Deepening<Card> {
    let reps = root_moves(state, worlds);
    tt.prepare(worlds_tag(worlds));
    let mut space = BridgeSpace::new(worlds, solver);
    let all = space.all_worlds();
    let moves: Vec<(Card, u64)> = reps.iter().map(|c| (c, all)).collect();
    search::iterative_deepening(&mut space, state, all, &moves, depth, toggles, tt)
}

/// Front of `state` at fixed `m` without optimizations.
pub fn alphamu_plain(state: &PlayState, m: u32, worlds: &[World], solver: &mut Solver) -> ParetoFront {
    let mut space = BridgeSpace::new(worlds, solver);
    let all = space.all_worlds();
    search::alphamu_plain(&mut space, state, m, all)
}

/// Front of `state` at fixed `m` with transposition table and early cuts.
pub fn alphamu(
    state: &PlayState,
    m: u32,
    worlds: &[World],
    alpha: &ParetoFront,
    tt: &mut BridgeTable,
    solver: &mut Solver,
    stats: &mut SearchStats,
) -> ParetoFront {
    tt.prepare(worlds_tag(worlds));
    let mut space = BridgeSpace::new(worlds, solver);
    let all = space.all_worlds();
    let options = NodeOptions { use_tt: true, use_early_cut: true };
    search::alphamu(&mut space, state, m, all, alpha, tt, options, stats)
}

/// Root move scores at fixed `m` with no optimization: every root move is
/// searched with plain αμ.
pub fn plain_root(state: &PlayState, m: u32, worlds: &[World], solver: &mut Solver) -> Vec<(Card, ParetoFront)> {
    let reps = root_moves(state, worlds);
    reps.iter()
        .map(|c| (c, alphamu_plain(&state.apply_move(c), m - 1, worlds, solver)))
        .collect()
}

/// First canonical move with the highest μ.
pub fn best_of(fronts: &[(Card, ParetoFront)]) -> (Card, Score) {
    let mut best: Option<(Card, Score)> = None;
    for (c, f) in fronts {
        if let Some(mu) = f.try_mu() {
            if best.is_none_or(|(_, b)| mu > b) {
                best = Some((*c, mu));
            }
        }
    }
    best.expect("some root move has a front")
}
