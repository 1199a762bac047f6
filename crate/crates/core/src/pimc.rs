//! Perfect Information Monte Carlo: score every move by its double-dummy
//! result in each world and play the best average.

use alloc::vec::Vec;

use crate::cards::{Card, CardSet, PlayState, RankNormalization};
use crate::dds::Solver;
use crate::pareto::Score;
use crate::worlds::{legal_moves_in_world, World};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveScore {
    pub card: Card,
    /// Worlds where the mover's side makes its goal after this card.
    pub wins: u32,
    /// Worlds where the card is legal.
    pub worlds: u32,
}

impl MoveScore {
    pub fn score(&self) -> Score {
        Score::new(self.wins, self.worlds)
    }
}

/// PIMC for whichever side is on play. The declarer side counts worlds
/// where the contract makes; the defense counts worlds where it fails.
pub fn pimc_choose(state: &PlayState, worlds: &[World], solver: &mut Solver) -> (Card, Vec<MoveScore>) {
    pimc_choose_with(state, worlds, solver, true)
}

/// As [`pimc_choose`]; `collapse` searches one card per class of
/// equivalent cards.
pub fn pimc_choose_with(
    state: &PlayState,
    worlds: &[World],
    solver: &mut Solver,
    collapse: bool,
) -> (Card, Vec<MoveScore>) {
    assert!(!worlds.is_empty(), "no world");
    let legal: Vec<CardSet> = worlds.iter().map(|w| legal_moves_in_world(state, w)).collect();
    let mut union = legal.iter().fold(CardSet::EMPTY, |a, &b| a | b);
    assert!(!union.is_empty(), "no legal move");
    if collapse {
        union = RankNormalization::new(state, worlds.iter().map(World::hands)).representatives(union);
    }
    if union.len() == 1 {
        let card = union.iter().next().expect("one card");
        return (card, Vec::new());
    }
    let max_side = state.is_declarer_side_to_move();
    let mut scores = Vec::with_capacity(union.len());
    for card in union.iter() {
        let next = state.apply_move(card);
        let mut s = MoveScore { card, wins: 0, worlds: 0 };
        for (w, l) in worlds.iter().zip(&legal) {
            if !l.contains(card) {
                continue;
            }
            s.worlds += 1;
            if solver.double_dummy_win(w, &next) == max_side {
                s.wins += 1;
            }
        }
        scores.push(s);
    }
    let mut best = scores[0];
    for s in &scores[1..] {
        if s.score() > best.score() {
            best = *s;
        }
    }
    (best.card, scores)
}
