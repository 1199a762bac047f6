//! Cards, hands and no-trump trick play on configurable deck sizes.
//!
//! A [`Card`] is packed into one byte (`suit * 16 + rank`) so that a
//! [`CardSet`] is a single `u64` with one 16-bit lane per suit. Iteration
//! over a set always yields the canonical order used everywhere in this
//! crate: suit-major (spades first), rank-descending within a suit.

use core::fmt;
use core::ops::{BitAnd, BitOr, BitOrAssign, Index, IndexMut, Not, Sub};

pub const ACE: u8 = 14;
pub const KING: u8 = 13;
pub const QUEEN: u8 = 12;
pub const JACK: u8 = 11;
pub const TEN: u8 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suit {
    Spades = 0,
    Hearts = 1,
    Diamonds = 2,
    Clubs = 3,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Spades, Suit::Hearts, Suit::Diamonds, Suit::Clubs];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub const fn from_index(i: usize) -> Suit {
        Suit::ALL[i & 3]
    }

    pub const fn letter(self) -> char {
        match self {
            Suit::Spades => 'S',
            Suit::Hearts => 'H',
            Suit::Diamonds => 'D',
            Suit::Clubs => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Suit> {
        match c.to_ascii_uppercase() {
            'S' => Some(Suit::Spades),
            'H' => Some(Suit::Hearts),
            'D' => Some(Suit::Diamonds),
            'C' => Some(Suit::Clubs),
            _ => None,
        }
    }
}

pub fn rank_char(rank: u8) -> char {
    match rank {
        14 => 'A',
        13 => 'K',
        12 => 'Q',
        11 => 'J',
        10 => 'T',
        2..=9 => (b'0' + rank) as char,
        _ => '?',
    }
}

pub fn rank_from_char(c: char) -> Option<u8> {
    match c.to_ascii_uppercase() {
        'A' => Some(14),
        'K' => Some(13),
        'Q' => Some(12),
        'J' => Some(11),
        'T' => Some(10),
        '2'..='9' => Some(c as u8 - b'0'),
        _ => None,
    }
}

/// A playing card. Ranks run 2..=14 with 14 the ace.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Card(u8);

impl Card {
    #[inline]
    pub fn new(suit: Suit, rank: u8) -> Card {
        assert!((2..=ACE).contains(&rank), "rank {rank} out of range");
        Card(((suit as u8) << 4) | rank)
    }

    #[inline]
    pub(crate) const fn from_index(i: u8) -> Card {
        Card(i)
    }

    /// Bit index inside a [`CardSet`].
    #[inline]
    pub const fn index(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn suit(self) -> Suit {
        Suit::from_index((self.0 >> 4) as usize)
    }

    #[inline]
    pub const fn rank(self) -> u8 {
        self.0 & 15
    }

    /// Milton Work points: A=4 K=3 Q=2 J=1.
    pub const fn hcp(self) -> u32 {
        match self.rank() {
            ACE => 4,
            KING => 3,
            QUEEN => 2,
            JACK => 1,
            _ => 0,
        }
    }

    fn canonical_key(self) -> (u8, u8) {
        (self.0 >> 4, 15 - self.rank())
    }
}

impl PartialOrd for Card {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: spades before hearts before diamonds before clubs,
/// higher ranks first.
impl Ord for Card {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.suit().letter(), rank_char(self.rank()))
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl core::str::FromStr for Card {
    type Err = ();

    /// Accepts `SA`, `hT`, `D9` style tokens.
    fn from_str(s: &str) -> Result<Card, ()> {
        let mut chars = s.chars();
        let suit = chars.next().and_then(Suit::from_letter).ok_or(())?;
        let rank = chars.next().and_then(rank_from_char).ok_or(())?;
        if chars.next().is_some() {
            return Err(());
        }
        Ok(Card::new(suit, rank))
    }
}

/// A set of cards as a bitboard, one 16-bit lane per suit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CardSet(pub u64);

impl CardSet {
    pub const EMPTY: CardSet = CardSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> CardSet {
        CardSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, card: Card) -> bool {
        self.0 & (1 << card.0) != 0
    }

    #[inline]
    pub fn insert(&mut self, card: Card) {
        self.0 |= 1 << card.0;
    }

    #[inline]
    pub fn remove(&mut self, card: Card) {
        self.0 &= !(1 << card.0);
    }

    #[inline]
    pub fn with(self, card: Card) -> CardSet {
        CardSet(self.0 | (1 << card.0))
    }

    #[inline]
    pub fn without(self, card: Card) -> CardSet {
        CardSet(self.0 & !(1 << card.0))
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: CardSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: CardSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Only the cards of `suit`.
    #[inline]
    pub fn suit(self, suit: Suit) -> CardSet {
        CardSet(self.0 & (0xFFFF << (suit.index() * 16)))
    }

    /// Rank bits of `suit` (bit r set when rank r is present).
    #[inline]
    pub fn suit_ranks(self, suit: Suit) -> u16 {
        (self.0 >> (suit.index() * 16)) as u16
    }

    #[inline]
    pub fn suit_len(self, suit: Suit) -> usize {
        self.suit_ranks(suit).count_ones() as usize
    }

    pub fn hcp(self) -> u32 {
        self.iter().map(Card::hcp).sum()
    }

    /// Highest card of `suit`, if any.
    pub fn highest_in(self, suit: Suit) -> Option<Card> {
        let lane = self.suit_ranks(suit);
        (lane != 0).then(|| Card::new(suit, 15 - lane.leading_zeros() as u8))
    }

    /// Lowest card of `suit`, if any.
    pub fn lowest_in(self, suit: Suit) -> Option<Card> {
        let lane = self.suit_ranks(suit);
        (lane != 0).then(|| Card::new(suit, lane.trailing_zeros() as u8))
    }

    /// Canonical-order iterator.
    pub fn iter(self) -> CardIter {
        CardIter(self.0)
    }
}

impl FromIterator<Card> for CardSet {
    fn from_iter<I: IntoIterator<Item = Card>>(iter: I) -> Self {
        let mut set = CardSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl IntoIterator for CardSet {
    type Item = Card;
    type IntoIter = CardIter;
    fn into_iter(self) -> CardIter {
        self.iter()
    }
}

impl BitOr for CardSet {
    type Output = CardSet;
    fn bitor(self, rhs: CardSet) -> CardSet {
        CardSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for CardSet {
    fn bitor_assign(&mut self, rhs: CardSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for CardSet {
    type Output = CardSet;
    fn bitand(self, rhs: CardSet) -> CardSet {
        CardSet(self.0 & rhs.0)
    }
}

impl Sub for CardSet {
    type Output = CardSet;
    fn sub(self, rhs: CardSet) -> CardSet {
        CardSet(self.0 & !rhs.0)
    }
}

impl Not for CardSet {
    type Output = CardSet;
    fn not(self) -> CardSet {
        CardSet(!self.0 & FULL_DECK_BITS)
    }
}

const FULL_DECK_BITS: u64 = 0x7FFC_7FFC_7FFC_7FFC;

impl fmt::Debug for CardSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Yields cards suit by suit (spades first), each suit from the top down.
#[derive(Clone)]
pub struct CardIter(u64);

impl Iterator for CardIter {
    type Item = Card;

    fn next(&mut self) -> Option<Card> {
        if self.0 == 0 {
            return None;
        }
        let lane = self.0.trailing_zeros() / 16;
        let ranks = (self.0 >> (lane * 16)) as u16;
        let rank = 15 - ranks.leading_zeros();
        let idx = lane * 16 + rank;
        self.0 &= !(1 << idx);
        Some(Card(idx as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for CardIter {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seat {
    North = 0,
    East = 1,
    South = 2,
    West = 3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    NorthSouth,
    EastWest,
}

impl Seat {
    pub const ALL: [Seat; 4] = [Seat::North, Seat::East, Seat::South, Seat::West];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub const fn from_index(i: usize) -> Seat {
        Seat::ALL[i & 3]
    }

    /// Next seat clockwise.
    #[inline]
    pub const fn next(self) -> Seat {
        Seat::from_index(self as usize + 1)
    }

    #[inline]
    pub const fn offset(self, n: usize) -> Seat {
        Seat::from_index(self as usize + n)
    }

    #[inline]
    pub const fn partner(self) -> Seat {
        Seat::from_index(self as usize + 2)
    }

    #[inline]
    pub const fn side(self) -> Side {
        if self as usize & 1 == 0 {
            Side::NorthSouth
        } else {
            Side::EastWest
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Seat::North => 'N',
            Seat::East => 'E',
            Seat::South => 'S',
            Seat::West => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Seat> {
        match c.to_ascii_uppercase() {
            'N' => Some(Seat::North),
            'E' => Some(Seat::East),
            'S' => Some(Seat::South),
            'W' => Some(Seat::West),
            _ => None,
        }
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Deck made of the top `ranks_per_suit` ranks of every suit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Deck {
    ranks_per_suit: u8,
}

impl Deck {
    pub const STANDARD: Deck = Deck { ranks_per_suit: 13 };

    /// Deck with `cards` cards (a multiple of 4 between 4 and 52).
    pub fn with_cards(cards: usize) -> Option<Deck> {
        (cards.is_multiple_of(4) && (4..=52).contains(&cards)).then_some(Deck {
            ranks_per_suit: (cards / 4) as u8,
        })
    }

    #[inline]
    pub const fn size(self) -> usize {
        self.ranks_per_suit as usize * 4
    }

    /// Tricks in a full hand, one per card of each player.
    #[inline]
    pub const fn total_tricks(self) -> u8 {
        self.ranks_per_suit
    }

    #[inline]
    pub const fn min_rank(self) -> u8 {
        15 - self.ranks_per_suit
    }

    pub fn cards(self) -> CardSet {
        let lane: u64 = ((1u64 << 15) - 1) & !((1u64 << self.min_rank()) - 1);
        CardSet(lane | lane << 16 | lane << 32 | lane << 48)
    }

    pub fn contains(self, card: Card) -> bool {
        card.rank() >= self.min_rank()
    }
}

/// Four hands indexed by seat. Not necessarily a complete deal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Hands(pub [CardSet; 4]);

impl Hands {
    pub fn all(&self) -> CardSet {
        self.0.iter().fold(CardSet::EMPTY, |acc, &h| acc | h)
    }

    pub fn holder(&self, card: Card) -> Option<Seat> {
        Seat::ALL.into_iter().find(|&s| self[s].contains(card))
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = CardSet::EMPTY;
        for h in self.0 {
            if !seen.is_disjoint(h) {
                return false;
            }
            seen |= h;
        }
        true
    }
}

impl Index<Seat> for Hands {
    type Output = CardSet;
    fn index(&self, seat: Seat) -> &CardSet {
        &self.0[seat.index()]
    }
}

impl IndexMut<Seat> for Hands {
    fn index_mut(&mut self, seat: Seat) -> &mut CardSet {
        &mut self.0[seat.index()]
    }
}

impl fmt::Debug for Hands {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::pbn::format_hands(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DealError {
    Overlap(Card),
    Missing(Card),
    OutsideDeck(Card),
    UnevenHands,
}

impl fmt::Display for DealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DealError::Overlap(c) => write!(f, "card {c} dealt twice"),
            DealError::Missing(c) => write!(f, "card {c} not dealt"),
            DealError::OutsideDeck(c) => write!(f, "card {c} not in the deck"),
            DealError::UnevenHands => f.write_str("hands have different sizes"),
        }
    }
}

impl core::error::Error for DealError {}

/// A complete deal: disjoint, equal-sized hands covering the whole deck.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Deal {
    hands: Hands,
    deck: Deck,
}

impl Deal {
    pub fn new(hands: Hands, deck: Deck) -> Result<Deal, DealError> {
        let mut seen = CardSet::EMPTY;
        for h in hands.0 {
            if let Some(c) = (seen & h).iter().next() {
                return Err(DealError::Overlap(c));
            }
            seen |= h;
        }
        if let Some(c) = (seen - deck.cards()).iter().next() {
            return Err(DealError::OutsideDeck(c));
        }
        if let Some(c) = (deck.cards() - seen).iter().next() {
            return Err(DealError::Missing(c));
        }
        if hands.0.iter().any(|h| h.len() != deck.total_tricks() as usize) {
            return Err(DealError::UnevenHands);
        }
        Ok(Deal { hands, deck })
    }

    #[inline]
    pub fn hands(&self) -> &Hands {
        &self.hands
    }

    #[inline]
    pub fn hand(&self, seat: Seat) -> CardSet {
        self.hands[seat]
    }

    #[inline]
    pub fn deck(&self) -> Deck {
        self.deck
    }
}

/// A no-trump contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Contract {
    pub declarer: Seat,
    pub required_tricks: u8,
}

impl Contract {
    pub fn new(declarer: Seat, required_tricks: u8, total_tricks: u8) -> Option<Contract> {
        (1..=total_tricks)
            .contains(&required_tricks)
            .then_some(Contract { declarer, required_tricks })
    }

    pub fn dummy(self) -> Seat {
        self.declarer.partner()
    }

    #[inline]
    pub fn is_declarer_side(self, seat: Seat) -> bool {
        seat.side() == self.declarer.side()
    }
}

const HISTORY_CAP: usize = 52;

/// Public state of the play: what has been played, by whom, and the score
/// in tricks. Hidden hands live in worlds, never here.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlayState {
    contract: Contract,
    total_tricks: u8,
    leader: Seat,
    trick: [Card; 4],
    trick_len: u8,
    declarer_tricks: u8,
    defense_tricks: u8,
    played: CardSet,
    played_by: [CardSet; 4],
    // seat in the top two bits, card index in the low six
    history: [u8; HISTORY_CAP],
    history_len: u8,
}

impl PlayState {
    /// Start of play: the opening lead belongs to declarer's left-hand
    /// opponent.
    pub fn new(contract: Contract, deck: Deck) -> PlayState {
        PlayState::from_position(contract, deck.total_tricks(), contract.declarer.next(), 0, 0)
    }

    /// A position where `declarer_tricks + defense_tricks` tricks are already
    /// over and the cards still held are the whole story (endgame studies).
    pub fn from_position(
        contract: Contract,
        total_tricks: u8,
        leader: Seat,
        declarer_tricks: u8,
        defense_tricks: u8,
    ) -> PlayState {
        assert!(declarer_tricks + defense_tricks <= total_tricks);
        assert!(contract.required_tricks <= total_tricks);
        PlayState {
            contract,
            total_tricks,
            leader,
            trick: [Card(0); 4],
            trick_len: 0,
            declarer_tricks,
            defense_tricks,
            played: CardSet::EMPTY,
            played_by: [CardSet::EMPTY; 4],
            history: [0; HISTORY_CAP],
            history_len: 0,
        }
    }

    #[inline]
    pub fn contract(&self) -> Contract {
        self.contract
    }

    #[inline]
    pub fn total_tricks(&self) -> u8 {
        self.total_tricks
    }

    #[inline]
    pub fn leader(&self) -> Seat {
        self.leader
    }

    #[inline]
    pub fn to_move(&self) -> Seat {
        self.leader.offset(self.trick_len as usize)
    }

    #[inline]
    pub fn declarer_tricks(&self) -> u8 {
        self.declarer_tricks
    }

    #[inline]
    pub fn defense_tricks(&self) -> u8 {
        self.defense_tricks
    }

    /// Tricks not yet won by either side, counting the one in progress.
    #[inline]
    pub fn tricks_remaining(&self) -> u8 {
        self.total_tricks - self.declarer_tricks - self.defense_tricks
    }

    #[inline]
    pub fn is_over(&self) -> bool {
        self.tricks_remaining() == 0
    }

    /// Every card played since this state's starting position, including
    /// the cards of the current trick.
    #[inline]
    pub fn played(&self) -> CardSet {
        self.played
    }

    #[inline]
    pub fn played_by(&self, seat: Seat) -> CardSet {
        self.played_by[seat.index()]
    }

    /// Cards of the trick in progress, in play order.
    #[inline]
    pub fn current_trick(&self) -> &[Card] {
        &self.trick[..self.trick_len as usize]
    }

    pub fn current_trick_cards(&self) -> CardSet {
        self.current_trick().iter().copied().collect()
    }

    #[inline]
    pub fn led_suit(&self) -> Option<Suit> {
        (self.trick_len > 0).then(|| self.trick[0].suit())
    }

    #[inline]
    pub fn is_declarer_side_to_move(&self) -> bool {
        self.contract.is_declarer_side(self.to_move())
    }

    /// Plays since the starting position, in order.
    pub fn history(&self) -> impl Iterator<Item = (Seat, Card)> + '_ {
        self.history[..self.history_len as usize]
            .iter()
            .map(|&b| (Seat::from_index((b >> 6) as usize), Card(b & 63)))
    }

    #[inline]
    pub fn moves_played(&self) -> usize {
        self.history_len as usize
    }

    /// Plays `card` for the seat to move. The card must not have been
    /// played already; whether the seat held it is a per-world question
    /// answered by the world model.
    pub fn apply_move(&self, card: Card) -> PlayState {
        assert!(!self.played.contains(card), "card {card} already played");
        assert!(!self.is_over(), "play is over");
        let seat = self.to_move();
        let mut next = *self;
        next.played.insert(card);
        next.played_by[seat.index()].insert(card);
        next.history[next.history_len as usize] = ((seat as u8) << 6) | card.0;
        next.history_len += 1;
        next.trick[next.trick_len as usize] = card;
        next.trick_len += 1;
        if next.trick_len == 4 {
            let winner = next.leader.offset(trick_winner_offset(&next.trick));
            if self.contract.is_declarer_side(winner) {
                next.declarer_tricks += 1;
            } else {
                next.defense_tricks += 1;
            }
            next.leader = winner;
            next.trick_len = 0;
        }
        next
    }
}

impl fmt::Debug for PlayState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlayState")
            .field("leader", &self.leader)
            .field("trick", &self.current_trick())
            .field("declarer_tricks", &self.declarer_tricks)
            .field("defense_tricks", &self.defense_tricks)
            .field("played", &self.played)
            .finish()
    }
}

/// Position (0..4, relative to the leader) of the card winning a complete
/// no-trump trick: the highest card of the led suit.
pub fn trick_winner_offset(trick: &[Card; 4]) -> usize {
    let led = trick[0].suit();
    let mut best = 0;
    for i in 1..4 {
        if trick[i].suit() == led && trick[i].rank() > trick[best].rank() {
            best = i;
        }
    }
    best
}

/// Legal cards from `hand` given the trick in progress: follow suit when
/// possible, otherwise anything.
#[inline]
pub fn legal_moves(state: &PlayState, hand: CardSet) -> CardSet {
    assert!(!hand.is_empty(), "seat to move has no cards");
    match state.led_suit() {
        Some(suit) if !hand.suit(suit).is_empty() => hand.suit(suit),
        _ => hand,
    }
}

/// Relabeling of the cards still in play so that each suit has consecutive
/// values, and the resulting equivalence between cards of one hand.
///
/// Cards of the trick in progress are still "in play" for this purpose:
/// they can separate two cards that would otherwise touch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankNormalization {
    // rank bits of the cards still in play, per suit
    live: [u16; 4],
    // bit r set when ranks r and the next live rank above it are NOT
    // held by the same hand in every world
    breaks: [u16; 4],
}

impl RankNormalization {
    /// `layouts` are the hands of every possible world (cards already played
    /// may still be present; they are ignored).
    pub fn new<'a, I>(state: &PlayState, layouts: I) -> RankNormalization
    where
        I: IntoIterator<Item = &'a Hands>,
    {
        let mut live = [0u16; 4];
        let mut breaks = [0u16; 4];
        for hands in layouts {
            for suit in Suit::ALL {
                let s = suit.index();
                let mut owner_ranks = [0u16; 4];
                for seat in Seat::ALL {
                    owner_ranks[seat.index()] = (hands[seat] - state.played()).suit_ranks(suit);
                }
                let in_trick = state.current_trick_cards().suit_ranks(suit);
                let held = owner_ranks.iter().fold(0, |a, &b| a | b);
                let lane = held | in_trick;
                live[s] |= lane;
                // walk adjacent pairs of live ranks
                let mut below: Option<(u8, Option<usize>)> = None;
                for rank in 2..=14u8 {
                    if lane & (1 << rank) == 0 {
                        continue;
                    }
                    let owner = owner_ranks.iter().position(|&o| o & (1 << rank) != 0);
                    if let Some((lower, lower_owner)) = below {
                        if owner.is_none() || lower_owner != owner {
                            breaks[s] |= 1 << lower;
                        }
                    }
                    below = Some((rank, owner));
                }
            }
        }
        RankNormalization { live, breaks }
    }

    /// Consecutive value of `card` among the cards of its suit still in
    /// play (0 for the lowest), or `None` when the card is out of play.
    pub fn relabel(&self, card: Card) -> Option<u8> {
        let lane = self.live[card.suit().index()];
        if lane & (1 << card.rank()) == 0 {
            return None;
        }
        Some((lane & ((1u16 << card.rank()) - 1)).count_ones() as u8)
    }

    /// Two cards are equivalent when they share a suit and, in every world,
    /// every live card between them (inclusive) sits in one hand.
    pub fn equivalent(&self, a: Card, b: Card) -> bool {
        if a.suit() != b.suit() {
            return false;
        }
        let s = a.suit().index();
        let (lo, hi) = if a.rank() <= b.rank() { (a.rank(), b.rank()) } else { (b.rank(), a.rank()) };
        let lane = self.live[s];
        if lane & (1 << lo) == 0 || lane & (1 << hi) == 0 {
            return false;
        }
        // breaks are recorded on the lower card of each adjacent pair
        let span: u16 = ((1u32 << hi) - (1u32 << lo)) as u16;
        self.breaks[s] & lane & span == 0
    }

    /// One representative (the highest) of each equivalence class in
    /// `cards`, in canonical order.
    pub fn representatives(&self, cards: CardSet) -> CardSet {
        let mut kept = CardSet::EMPTY;
        let mut last: Option<Card> = None;
        for c in cards.iter() {
            match last {
                Some(prev) if self.equivalent(prev, c) => {}
                _ => {
                    kept.insert(c);
                    last = Some(c);
                }
            }
        }
        kept
    }
}
