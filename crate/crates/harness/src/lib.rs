//! Experiment harness around `alphamu-core`: configuration, deal
//! generation and filtering, duplicate matches and their reports.

pub mod config;
pub mod deals;
pub mod duplicate;
pub mod error;
pub mod game;
pub mod report;
pub mod seeds;

pub use config::{EngineConfig, EngineKind, MatchConfig};
pub use error::{HarnessError, Result};
pub use game::{play_deal, GameRecord, Table};
