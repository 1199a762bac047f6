//! Possible worlds: complete hypotheses for the hidden hands that agree
//! with the visible cards, the auction and everything played so far.

use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cards::{legal_moves, Card, CardSet, Contract, Deal, Deck, Hands, PlayState, Seat, Suit};

/// Hands of every seat as they stood at the state's starting position.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct World {
    hands: Hands,
}

impl World {
    pub fn new(hands: Hands) -> World {
        World { hands }
    }

    #[inline]
    pub fn hands(&self) -> &Hands {
        &self.hands
    }

    /// Cards `seat` still holds once `state`'s plays are removed.
    #[inline]
    pub fn remaining(&self, seat: Seat, state: &PlayState) -> CardSet {
        self.hands[seat] - state.played()
    }

    pub fn remaining_hands(&self, state: &PlayState) -> Hands {
        let mut h = self.hands;
        for seat in Seat::ALL {
            h[seat] = h[seat] - state.played();
        }
        h
    }
}

impl fmt::Debug for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "World({:?})", self.hands)
    }
}

/// Legal cards for the seat to move in `world`, canonical order.
pub fn legal_moves_in_world(state: &PlayState, world: &World) -> CardSet {
    legal_moves(state, world.remaining(state.to_move(), state))
}

/// Bounds on one seat's original hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HandConstraint {
    pub hcp: (u32, u32),
    /// Inclusive length range per suit.
    pub suit_len: [(u8, u8); 4],
}

impl Default for HandConstraint {
    fn default() -> Self {
        HandConstraint { hcp: (0, u32::MAX), suit_len: [(0, u8::MAX); 4] }
    }
}

impl HandConstraint {
    pub fn admits(&self, hand: CardSet) -> bool {
        let hcp = hand.hcp();
        if hcp < self.hcp.0 || hcp > self.hcp.1 {
            return false;
        }
        Suit::ALL.iter().all(|&s| {
            let (lo, hi) = self.suit_len[s.index()];
            let n = hand.suit_len(s);
            n >= lo as usize && n <= hi as usize
        })
    }
}

/// Constraints every world must satisfy besides the play history, which is
/// always checked (including voids revealed by discards).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    pub seats: [HandConstraint; 4],
    /// Suit bits (1 << suit index) a seat is known to hold no more of.
    pub voids: [u8; 4],
}

impl ConstraintSet {
    pub fn none() -> ConstraintSet {
        ConstraintSet::default()
    }

    /// Opener (declarer) 15-17 HCP with no long suit, responder (dummy)
    /// at least 10 HCP. The long-suit cap scales with the deck: five cards
    /// at 52, proportionally fewer on reduced decks.
    pub fn one_nt_three_nt(contract: Contract, deck: Deck) -> ConstraintSet {
        let mut set = ConstraintSet::none();
        let cap = max_suit_len(deck);
        set.seats[contract.declarer.index()] = HandConstraint { hcp: (15, 17), suit_len: [(0, cap); 4] };
        set.seats[contract.dummy().index()] = HandConstraint { hcp: (10, u32::MAX), ..HandConstraint::default() };
        set
    }

    pub fn with_void(mut self, seat: Seat, suit: Suit) -> ConstraintSet {
        self.voids[seat.index()] |= 1 << suit.index();
        self
    }
}

/// Longest suit a balanced opener may hold: `ceil(5 * n / 13)` for `n`
/// cards per hand.
pub fn max_suit_len(deck: Deck) -> u8 {
    let n = deck.total_tricks() as u32;
    ((5 * n).div_ceil(13)) as u8
}

/// The one predicate every produced world passes.
pub fn is_consistent(world: &World, state: &PlayState, constraints: &ConstraintSet) -> bool {
    let hands = world.hands();
    if !hands.is_disjoint() {
        return false;
    }
    let size = hands[Seat::North].len();
    if Seat::ALL.iter().any(|&s| hands[s].len() != size) {
        return false;
    }
    let tricks_before = (state.moves_played() - state.current_trick().len()) / 4;
    if size != state.tricks_remaining() as usize + tricks_before {
        return false;
    }
    for seat in Seat::ALL {
        if !state.played_by(seat).is_subset(hands[seat]) {
            return false;
        }
        if !constraints.seats[seat.index()].admits(hands[seat]) {
            return false;
        }
        let remaining = hands[seat] - state.played();
        let voids = constraints.voids[seat.index()];
        if Suit::ALL.iter().any(|&s| voids & (1 << s.index()) != 0 && !remaining.suit(s).is_empty()) {
            return false;
        }
    }
    follows_suit(hands, state)
}

// Every discard must have been forced: the seat held nothing of the led
// suit at that moment.
fn follows_suit(hands: &Hands, state: &PlayState) -> bool {
    let mut gone = [CardSet::EMPTY; 4];
    let mut led = None;
    for (i, (seat, card)) in state.history().enumerate() {
        if i % 4 == 0 {
            led = Some(card.suit());
        } else if let Some(suit) = led {
            if card.suit() != suit {
                let held = (hands[seat] - gone[seat.index()]).suit(suit);
                if !held.is_empty() {
                    return false;
                }
            }
        }
        gone[seat.index()].insert(card);
    }
    true
}

/// What one player can see: the cards in play at the state's starting
/// position and the hands they know.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perspective {
    pub universe: CardSet,
    pub known: [Option<CardSet>; 4],
}

impl Perspective {
    /// Declarer's view at the start of a deal: declarer and dummy hands.
    pub fn declarer(hands: &Hands, contract: Contract, deck: Deck) -> Perspective {
        let mut known = [None; 4];
        known[contract.declarer.index()] = Some(hands[contract.declarer]);
        known[contract.dummy().index()] = Some(hands[contract.dummy()]);
        Perspective { universe: deck.cards(), known }
    }

    /// A defender's view once dummy is exposed.
    pub fn defender(seat: Seat, hands: &Hands, contract: Contract, deck: Deck) -> Perspective {
        let mut known = [None; 4];
        known[seat.index()] = Some(hands[seat]);
        known[contract.dummy().index()] = Some(hands[contract.dummy()]);
        Perspective { universe: deck.cards(), known }
    }

    /// Everything visible (double-dummy study mode).
    pub fn open(hands: &Hands) -> Perspective {
        Perspective { universe: hands.all(), known: hands.0.map(Some) }
    }

    fn hidden_seats(&self) -> Vec<Seat> {
        Seat::ALL.into_iter().filter(|s| self.known[s.index()].is_none()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorldError {
    /// Rejection sampling ran out of attempts.
    SamplingFailed { attempts: u64, found: usize },
    /// Exhaustive enumeration would be too large.
    TooManyWorlds { hidden_cards: usize, combinations: u64 },
    /// The visible cards contradict the play so far.
    Inconsistent,
    /// No world survived a filter.
    Exhausted,
}

impl fmt::Display for WorldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldError::SamplingFailed { attempts, found } => {
                write!(f, "world sampling failed after {attempts} attempts ({found} found)")
            }
            WorldError::TooManyWorlds { hidden_cards, combinations } => {
                write!(f, "{combinations} layouts of {hidden_cards} hidden cards is too many to enumerate")
            }
            WorldError::Inconsistent => f.write_str("visible hands contradict the play"),
            WorldError::Exhausted => f.write_str("no possible world left"),
        }
    }
}

impl core::error::Error for WorldError {}

/// Attempts allowed per requested world.
pub const REJECTION_BUDGET: u64 = 10_000;

struct Layout {
    base: Hands,
    hidden: Vec<Seat>,
    slots: Vec<usize>,
    pool: Vec<Card>,
}

fn layout(state: &PlayState, perspective: &Perspective) -> Result<Layout, WorldError> {
    let hidden = perspective.hidden_seats();
    let size = perspective.universe.len() / 4;
    let mut base = Hands::default();
    for seat in Seat::ALL {
        match perspective.known[seat.index()] {
            Some(h) => {
                if !state.played_by(seat).is_subset(h) {
                    return Err(WorldError::Inconsistent);
                }
                base[seat] = h;
            }
            None => base[seat] = state.played_by(seat),
        }
    }
    let fixed = base.all();
    if !fixed.is_subset(perspective.universe) || !base.is_disjoint() {
        return Err(WorldError::Inconsistent);
    }
    let pool: Vec<Card> = (perspective.universe - fixed).iter().collect();
    let mut slots = Vec::with_capacity(hidden.len());
    for &seat in &hidden {
        let have = base[seat].len();
        if have > size {
            return Err(WorldError::Inconsistent);
        }
        slots.push(size - have);
    }
    if slots.iter().sum::<usize>() != pool.len() {
        return Err(WorldError::Inconsistent);
    }
    Ok(Layout { base, hidden, slots, pool })
}

/// Rejection sampling: shuffle the unseen cards into the hidden seats and
/// keep the layouts that pass [`is_consistent`].
pub fn sample_worlds(
    state: &PlayState,
    perspective: &Perspective,
    constraints: &ConstraintSet,
    n: usize,
    seed: u64,
) -> Result<Vec<World>, WorldError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_worlds_with(state, perspective, constraints, n, &mut rng)
}

pub fn sample_worlds_with<R: Rng>(
    state: &PlayState,
    perspective: &Perspective,
    constraints: &ConstraintSet,
    n: usize,
    rng: &mut R,
) -> Result<Vec<World>, WorldError> {
    assert!(n >= 1, "asked for no worlds");
    let Layout { base, hidden, slots, mut pool } = layout(state, perspective)?;
    let budget = REJECTION_BUDGET * n as u64;
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0u64;
    while out.len() < n {
        if attempts == budget {
            return Err(WorldError::SamplingFailed { attempts, found: out.len() });
        }
        attempts += 1;
        pool.shuffle(rng);
        let mut hands = base;
        let mut at = 0;
        for (&seat, &k) in hidden.iter().zip(&slots) {
            hands[seat] |= pool[at..at + k].iter().copied().collect::<CardSet>();
            at += k;
        }
        let world = World::new(hands);
        if is_consistent(&world, state, constraints) {
            out.push(world);
        }
    }
    Ok(out)
}

/// Worlds where the seat to move in `state` held `card` and could play it.
pub fn filter_worlds(worlds: &[World], card: Card, state: &PlayState) -> Result<Vec<World>, WorldError> {
    let kept: Vec<World> = worlds
        .iter()
        .filter(|w| legal_moves_in_world(state, w).contains(card))
        .copied()
        .collect();
    if kept.is_empty() {
        Err(WorldError::Exhausted)
    } else {
        Ok(kept)
    }
}

/// Exhaustive enumeration is refused above this many hidden cards.
pub const ENUMERATION_HIDDEN_LIMIT: usize = 20;
/// ... or above this many raw layouts.
pub const ENUMERATION_LAYOUT_LIMIT: u64 = 200_000;

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Every consistent world, duplicate-free, in a deterministic order.
pub fn enumerate_all_worlds(
    state: &PlayState,
    perspective: &Perspective,
    constraints: &ConstraintSet,
) -> Result<Vec<World>, WorldError> {
    let Layout { base, hidden, slots, pool } = layout(state, perspective)?;
    let mut combos = 1u64;
    let mut left = pool.len() as u64;
    for &k in &slots {
        combos = combos.saturating_mul(binomial(left, k as u64));
        left -= k as u64;
    }
    if pool.len() > ENUMERATION_HIDDEN_LIMIT || combos > ENUMERATION_LAYOUT_LIMIT {
        return Err(WorldError::TooManyWorlds { hidden_cards: pool.len(), combinations: combos });
    }
    let mut out = Vec::new();
    let pool_set: CardSet = pool.iter().copied().collect();
    assign(&base, &hidden, &slots, pool_set, state, constraints, &mut out);
    Ok(out)
}

fn assign(
    hands: &Hands,
    hidden: &[Seat],
    slots: &[usize],
    pool: CardSet,
    state: &PlayState,
    constraints: &ConstraintSet,
    out: &mut Vec<World>,
) {
    match hidden {
        [] => {
            let world = World::new(*hands);
            if is_consistent(&world, state, constraints) {
                out.push(world);
            }
        }
        [seat] => {
            let mut h = *hands;
            h[*seat] |= pool;
            assign(&h, &[], &[], CardSet::EMPTY, state, constraints, out);
        }
        [seat, rest @ ..] => {
            let cards: Vec<Card> = pool.iter().collect();
            for_each_subset(&cards, slots[0], &mut |subset| {
                let mut h = *hands;
                h[*seat] |= subset;
                assign(&h, rest, &slots[1..], pool - subset, state, constraints, out);
            });
        }
    }
}

fn for_each_subset(cards: &[Card], k: usize, f: &mut impl FnMut(CardSet)) {
    fn go(cards: &[Card], k: usize, acc: CardSet, f: &mut impl FnMut(CardSet)) {
        if k == 0 {
            f(acc);
            return;
        }
        if cards.len() < k {
            return;
        }
        go(&cards[1..], k - 1, acc.with(cards[0]), f);
        go(&cards[1..], k, acc, f);
    }
    go(cards, k, CardSet::EMPTY, f);
}

/// Deals `cards` into four equal hands uniformly at random.
pub fn random_hands<R: Rng>(cards: CardSet, rng: &mut R) -> Hands {
    assert!(cards.len().is_multiple_of(4), "cards do not split into four hands");
    let mut pool: Vec<Card> = cards.iter().collect();
    pool.shuffle(rng);
    let n = pool.len() / 4;
    let mut hands = Hands::default();
    for (i, seat) in Seat::ALL.into_iter().enumerate() {
        hands[seat] = pool[i * n..(i + 1) * n].iter().copied().collect();
    }
    hands
}

/// A uniformly random deal of `deck`.
pub fn random_deal<R: Rng>(deck: Deck, rng: &mut R) -> Deal {
    Deal::new(random_hands(deck.cards(), rng), deck).expect("a shuffled deck is a valid deal")
}
