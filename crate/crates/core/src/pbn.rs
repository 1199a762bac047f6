//! PBN-style deal text: `N:AKQJ.T98.765.432 E:... S:... W:...`.
//!
//! Each hand lists spades, hearts, diamonds and clubs separated by dots.
//! The classic PBN form with a single leading seat (`N:h1 h2 h3 h4`,
//! clockwise) is accepted as well.

use alloc::string::{String, ToString};
use core::fmt;
use core::fmt::Write;

use crate::cards::{rank_char, rank_from_char, Card, CardSet, Deal, DealError, Deck, Hands, Seat, Suit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PbnError {
    /// A token that is not a seat-prefixed hand or has too many suits.
    Malformed(String),
    /// A card character that is not a rank.
    BadRank(String),
    DuplicateCard(String),
    /// A seat given twice, or not all four seats present.
    Seats(String),
    /// The hands do not make up a full deck of equal hands.
    Deal(DealError),
}

impl fmt::Display for PbnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PbnError::Malformed(t) => write!(f, "malformed hand `{t}`"),
            PbnError::BadRank(t) => write!(f, "bad rank in `{t}`"),
            PbnError::DuplicateCard(t) => write!(f, "duplicate card {t}"),
            PbnError::Seats(t) => write!(f, "bad seat layout at `{t}`"),
            PbnError::Deal(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PbnError {}

fn parse_hand(token: &str) -> Result<CardSet, PbnError> {
    let mut hand = CardSet::EMPTY;
    let suits: alloc::vec::Vec<&str> = token.split('.').collect();
    if suits.len() != 4 {
        return Err(PbnError::Malformed(token.to_string()));
    }
    for (i, ranks) in suits.iter().enumerate() {
        if *ranks == "-" {
            continue;
        }
        for ch in ranks.chars() {
            let rank = rank_from_char(ch).ok_or_else(|| PbnError::BadRank(token.to_string()))?;
            let card = Card::new(Suit::from_index(i), rank);
            if hand.contains(card) {
                return Err(PbnError::DuplicateCard(card.to_string()));
            }
            hand.insert(card);
        }
    }
    Ok(hand)
}

/// Parses four hands without requiring a complete deck.
pub fn parse_hands(text: &str) -> Result<Hands, PbnError> {
    let tokens: alloc::vec::Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 4 {
        return Err(PbnError::Seats(text.to_string()));
    }
    let mut hands = Hands::default();
    let mut filled = [false; 4];
    let mut seat = None::<Seat>;
    for token in tokens {
        let (this_seat, body) = match token.split_once(':') {
            Some((prefix, body)) => {
                let mut chars = prefix.chars();
                let s = chars
                    .next()
                    .and_then(Seat::from_letter)
                    .filter(|_| chars.next().is_none())
                    .ok_or_else(|| PbnError::Seats(token.to_string()))?;
                (s, body)
            }
            None => match seat {
                Some(prev) => (prev.next(), token),
                None => return Err(PbnError::Seats(token.to_string())),
            },
        };
        if filled[this_seat.index()] {
            return Err(PbnError::Seats(token.to_string()));
        }
        let hand = parse_hand(body)?;
        if let Some(dup) = (hand & hands.all()).iter().next() {
            return Err(PbnError::DuplicateCard(dup.to_string()));
        }
        hands[this_seat] = hand;
        filled[this_seat.index()] = true;
        seat = Some(this_seat);
    }
    Ok(hands)
}

/// Parses a complete deal; the deck size is the number of cards given.
pub fn parse_deal(text: &str) -> Result<Deal, PbnError> {
    let hands = parse_hands(text)?;
    let total = hands.all().len();
    let deck = Deck::with_cards(total).ok_or(PbnError::Deal(DealError::UnevenHands))?;
    Deal::new(hands, deck).map_err(PbnError::Deal)
}

pub fn format_hand(hand: CardSet) -> String {
    let mut out = String::new();
    for (i, suit) in Suit::ALL.into_iter().enumerate() {
        if i > 0 {
            out.push('.');
        }
        for card in hand.suit(suit).iter() {
            out.push(rank_char(card.rank()));
        }
    }
    out
}

pub fn format_hands(hands: &Hands) -> String {
    let mut out = String::new();
    for (i, seat) in Seat::ALL.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{}:{}", seat.letter(), format_hand(hands[seat]));
    }
    out
}

pub fn format_deal(deal: &Deal) -> String {
    format_hands(deal.hands())
}
