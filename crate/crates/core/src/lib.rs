//! Anytime Pareto-front search for declarer play at no-trump.
//!
//! The crate is `no_std` (it needs `alloc`). It contains the card and trick
//! mechanics, a double-dummy solver, outcome vectors and Pareto fronts,
//! possible-world generation, the PIMC baseline and the αμ search with its
//! transposition table, early cut and root cut.
#![no_std]

extern crate alloc;

pub mod alphamu;
pub mod cards;
pub mod dds;
pub mod pareto;
pub mod pbn;
pub mod pimc;
pub mod search;
pub mod tree;
pub mod worlds;

pub use cards::{Card, CardSet, Contract, Deal, Deck, Hands, PlayState, RankNormalization, Seat, Side, Suit};
pub use dds::{Solver, SolverConfig};
pub use pareto::{OutcomeVector, ParetoFront, Score, MAX_WORLDS};
pub use alphamu::{choose, Decision};
pub use pimc::{pimc_choose, MoveScore};
pub use search::{SearchConfig, SearchStats, Toggles};
pub use tree::{abstract_tree_search, Tree};
pub use worlds::{ConstraintSet, Perspective, World, WorldError};
