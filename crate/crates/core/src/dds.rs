//! Double-dummy solver: every hand visible, both sides play perfectly.
//!
//! The core is a zero-window alpha-beta on "can the declarer side still
//! take `need` more tricks". Positions at trick boundaries are cached in a
//! transposition table of trick-count bounds; inside a trick, cards that
//! touch (no outstanding card between them) are searched once.
//!
//! Table entries depend only on the cards still held and the leader, so a
//! [`Solver`] can be reused across worlds and calls.

use alloc::vec;
use alloc::vec::Vec;

use crate::cards::{Card, Hands, PlayState, Seat, Side, Suit};
use crate::worlds::World;

const fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const fn zobrist_table() -> [[u64; 64]; 4] {
    let mut t = [[0u64; 64]; 4];
    let mut s = 0;
    while s < 4 {
        let mut c = 0;
        while c < 64 {
            t[s][c] = splitmix((s * 64 + c) as u64 + 1);
            c += 1;
        }
        s += 1;
    }
    t
}

/// Per-(seat, card) random keys.
pub(crate) static ZOBRIST: [[u64; 64]; 4] = zobrist_table();
static LEADER_KEY: [u64; 4] = [splitmix(1001), splitmix(1002), splitmix(1003), splitmix(1004)];

/// Zobrist hash of a set of hands.
pub fn hands_hash(hands: &Hands) -> u64 {
    let mut h = 0;
    for seat in Seat::ALL {
        for c in hands[seat].iter() {
            h ^= ZOBRIST[seat.index()][c.index() as usize];
        }
    }
    h
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    hands: [u64; 4],
    leader: u8,
    trick_len: u8,
    led: u8,
    win_rank: u8,
    win_seat: u8,
    trick_cards: u64,
    max_side: Side,
    hash: u64,
}

impl Pos {
    fn new(world: &World, state: &PlayState) -> Pos {
        let remaining = world.remaining_hands(state);
        let mut pos = Pos {
            hands: remaining.0.map(|h| h.bits()),
            leader: state.leader().index() as u8,
            trick_len: 0,
            led: 0,
            win_rank: 0,
            win_seat: 0,
            trick_cards: 0,
            max_side: state.contract().declarer.side(),
            hash: hands_hash(&remaining),
        };
        for &card in state.current_trick() {
            let seat = pos.to_move();
            pos.note_trick_card(seat, card);
        }
        pos
    }

    #[inline]
    fn to_move(&self) -> u8 {
        (self.leader + self.trick_len) & 3
    }

    #[inline]
    fn tricks_left(&self) -> u8 {
        let cards: u32 = self.hands.iter().map(|h| h.count_ones()).sum::<u32>() + self.trick_len as u32;
        (cards / 4) as u8
    }

    #[inline]
    fn is_max(&self, seat: u8) -> bool {
        Seat::from_index(seat as usize).side() == self.max_side
    }

    fn note_trick_card(&mut self, seat: u8, card: Card) {
        if self.trick_len == 0 {
            self.led = card.suit() as u8;
            self.win_rank = card.rank();
            self.win_seat = seat;
        } else if card.suit() as u8 == self.led && card.rank() > self.win_rank {
            self.win_rank = card.rank();
            self.win_seat = seat;
        }
        self.trick_cards |= 1 << card.index();
        self.trick_len += 1;
    }

    /// Plays `card` for the seat to move. Returns whether the move
    /// completed a trick won by the declarer side.
    fn play(&mut self, card: Card) -> bool {
        let seat = self.to_move();
        self.hands[seat as usize] &= !(1 << card.index());
        self.hash ^= ZOBRIST[seat as usize][card.index() as usize];
        self.note_trick_card(seat, card);
        if self.trick_len == 4 {
            let won = self.is_max(self.win_seat);
            self.leader = self.win_seat;
            self.trick_len = 0;
            self.trick_cards = 0;
            won
        } else {
            false
        }
    }

    #[inline]
    fn key(&self) -> u64 {
        self.hash ^ LEADER_KEY[self.leader as usize]
    }

    fn legal(&self, seat: u8) -> u64 {
        let hand = self.hands[seat as usize];
        if self.trick_len > 0 {
            let lane = hand & (0xFFFF << (self.led as u32 * 16));
            if lane != 0 {
                return lane;
            }
        }
        hand
    }
}

#[derive(Clone, Copy, Default)]
struct Slot {
    hands: [u64; 4],
    leader: u8,
    // bounds on declarer-side tricks from this trick on
    lower: u8,
    upper: u8,
    depth: u8,
    used: bool,
}

/// Solver statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub calls: u64,
    pub nodes: u64,
    pub tt_hits: u64,
}

/// Knobs kept for testing; both are on in normal use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub transposition_table: bool,
    pub equivalence_reduction: bool,
    /// log2 of the number of two-entry buckets.
    pub table_bits: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { transposition_table: true, equivalence_reduction: true, table_bits: 15 }
    }
}

pub struct Solver {
    config: SolverConfig,
    table: Vec<[Slot; 2]>,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        let buckets = if config.transposition_table { 1usize << config.table_bits } else { 0 };
        Solver { config, table: vec![[Slot::default(); 2]; buckets], stats: SolverStats::default() }
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn clear(&mut self) {
        self.table.iter_mut().for_each(|b| *b = [Slot::default(); 2]);
    }

    fn check(world: &World, state: &PlayState) {
        for seat in Seat::ALL {
            assert!(
                state.played_by(seat).is_subset(world.hands()[seat]),
                "world does not hold the cards {seat} played"
            );
        }
        debug_assert!(
            crate::worlds::is_consistent(world, state, &crate::worlds::ConstraintSet::none()),
            "world inconsistent with the play"
        );
    }

    /// Whether the declarer side reaches its contract with best play by
    /// everyone, all hands visible.
    pub fn double_dummy_win(&mut self, world: &World, state: &PlayState) -> bool {
        self.stats.calls += 1;
        let required = state.contract().required_tricks;
        if state.declarer_tricks() >= required {
            return true;
        }
        let need = required - state.declarer_tricks();
        if need > state.tricks_remaining() {
            return false;
        }
        Self::check(world, state);
        let pos = Pos::new(world, state);
        self.search(&pos, need)
    }

    /// Exact number of tricks the declarer side ends with under best play.
    pub fn max_tricks(&mut self, world: &World, state: &PlayState) -> u8 {
        self.stats.calls += 1;
        Self::check(world, state);
        let pos = Pos::new(world, state);
        // largest `need` that still succeeds; success is monotone in `need`
        let (mut lo, mut hi) = (0u8, pos.tricks_left());
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.search(&pos, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        state.declarer_tricks() + lo
    }

    fn probe(&mut self, pos: &Pos) -> Option<(u8, u8)> {
        if !self.config.transposition_table {
            return None;
        }
        let key = pos.key();
        let bucket = &self.table[(key as usize) & (self.table.len() - 1)];
        for slot in bucket {
            if slot.used && slot.leader == pos.leader && slot.hands == pos.hands {
                self.stats.tt_hits += 1;
                return Some((slot.lower, slot.upper));
            }
        }
        None
    }

    fn store(&mut self, pos: &Pos, lower: u8, upper: u8) {
        if !self.config.transposition_table {
            return;
        }
        let key = pos.key();
        let mask = self.table.len() - 1;
        let bucket = &mut self.table[(key as usize) & mask];
        let depth = pos.tricks_left();
        for slot in bucket.iter_mut() {
            if slot.used && slot.leader == pos.leader && slot.hands == pos.hands {
                slot.lower = slot.lower.max(lower);
                slot.upper = slot.upper.min(upper);
                return;
            }
        }
        let fresh = Slot { hands: pos.hands, leader: pos.leader, lower, upper, depth, used: true };
        // slot 0 keeps the deeper entry, slot 1 always takes the newcomer
        if !bucket[0].used || depth >= bucket[0].depth {
            bucket[1] = bucket[0];
            bucket[0] = fresh;
        } else {
            bucket[1] = fresh;
        }
    }

    fn search(&mut self, pos: &Pos, need: u8) -> bool {
        self.stats.nodes += 1;
        if need == 0 {
            return true;
        }
        let left = pos.tricks_left();
        if need > left {
            return false;
        }
        let at_trick_start = pos.trick_len == 0;
        if at_trick_start {
            if let Some((lower, upper)) = self.probe(pos) {
                if lower >= need {
                    return true;
                }
                if upper < need {
                    return false;
                }
            }
        }
        let seat = pos.to_move();
        let max = pos.is_max(seat);
        let mut moves = [Card::from_index(0); 13];
        let n = self.ordered_moves(pos, seat, &mut moves);
        let mut result = !max;
        for &card in &moves[..n] {
            let mut child = *pos;
            let won = child.play(card);
            let r = self.search(&child, need - won as u8);
            if r == max {
                result = max;
                break;
            }
        }
        if at_trick_start {
            if result {
                self.store(pos, need, left);
            } else {
                self.store(pos, 0, need - 1);
            }
        }
        result
    }

    fn ordered_moves(&self, pos: &Pos, seat: u8, out: &mut [Card; 13]) -> usize {
        let legal = pos.legal(seat);
        let mut others = pos.trick_cards;
        for s in 0..4 {
            if s != seat as usize {
                others |= pos.hands[s];
            }
        }
        let mut scored: [(i32, Card); 13] = [(0, Card::from_index(0)); 13];
        let mut n = 0;
        for suit in Suit::ALL {
            let lane = (legal >> (suit.index() * 16)) as u16;
            if lane == 0 {
                continue;
            }
            let other_lane = (others >> (suit.index() * 16)) as u16;
            let mut last_kept: Option<u8> = None;
            let mut bits = lane;
            while bits != 0 {
                let rank = 15 - bits.leading_zeros() as u8;
                bits &= !(1 << rank);
                if self.config.equivalence_reduction {
                    if let Some(top) = last_kept {
                        let between = ((1u32 << top) - (1u32 << (rank + 1))) as u16;
                        if other_lane & between == 0 {
                            continue;
                        }
                    }
                }
                last_kept = Some(rank);
                let card = Card::new(suit, rank);
                scored[n] = (move_score(pos, seat, card, other_lane), card);
                n += 1;
            }
        }
        // insertion sort, stable, highest score first
        for i in 1..n {
            let mut j = i;
            while j > 0 && scored[j - 1].0 < scored[j].0 {
                scored.swap(j - 1, j);
                j -= 1;
            }
        }
        for i in 0..n {
            out[i] = scored[i].1;
        }
        n
    }
}

// Ordering heuristic only; any order gives the same answers.
fn move_score(pos: &Pos, seat: u8, card: Card, other_lane: u16) -> i32 {
    let rank = card.rank() as i32;
    if pos.trick_len == 0 {
        let top_outstanding = 15 - other_lane.leading_zeros() as i32;
        return if other_lane == 0 || rank > top_outstanding { 100 + rank } else { 50 - rank };
    }
    let following = card.suit() as u8 == pos.led;
    let partner_winning = (pos.win_seat + 2) & 3 == seat;
    if !following {
        // discards: cheapest first
        return -rank;
    }
    if partner_winning {
        return 50 - rank;
    }
    if rank > pos.win_rank as i32 {
        // beat the current winner as cheaply as possible
        100 - rank
    } else {
        50 - rank
    }
}

/// One-shot convenience wrapper creating a small solver.
pub fn double_dummy_win(world: &World, state: &PlayState) -> bool {
    Solver::new(SolverConfig { table_bits: 10, ..SolverConfig::default() }).double_dummy_win(world, state)
}

pub fn max_tricks(world: &World, state: &PlayState) -> u8 {
    Solver::new(SolverConfig { table_bits: 10, ..SolverConfig::default() }).max_tricks(world, state)
}
