//! Match settings, loadable from TOML. Every field has a default, so a
//! config file only lists what it changes.

use std::fmt;
use std::path::Path;

use alphamu_core::worlds::{max_suit_len, HandConstraint};
use alphamu_core::{ConstraintSet, Contract, Deck, SearchConfig, Seat, Toggles, MAX_WORLDS};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Pimc,
    Alphamu,
}

/// One declarer configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    pub engine: EngineKind,
    /// Max moves of lookahead; ignored by PIMC.
    pub m: u32,
    pub worlds: usize,
    pub tt: bool,
    pub early_cut: bool,
    pub root_cut: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { engine: EngineKind::Alphamu, m: 1, worlds: 10, tt: true, early_cut: true, root_cut: true }
    }
}

impl EngineConfig {
    pub fn alphamu(m: u32, worlds: usize) -> EngineConfig {
        EngineConfig { m, worlds, ..EngineConfig::default() }
    }

    pub fn pimc(worlds: usize) -> EngineConfig {
        EngineConfig { engine: EngineKind::Pimc, m: 1, worlds, ..EngineConfig::default() }
    }

    pub fn with_toggles(mut self, t: Toggles) -> EngineConfig {
        self.tt = t.tt;
        self.early_cut = t.early_cut;
        self.root_cut = t.root_cut;
        self
    }

    pub fn toggles(&self) -> Toggles {
        Toggles { tt: self.tt, early_cut: self.early_cut, root_cut: self.root_cut }
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig::new(self.m, self.worlds).with_toggles(self.toggles())
    }

    /// PIMC plays like αμ at one Max move, so it reports M = 1.
    pub fn depth(&self) -> u32 {
        match self.engine {
            EngineKind::Pimc => 1,
            EngineKind::Alphamu => self.m,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.worlds == 0 || self.worlds > MAX_WORLDS {
            return Err(HarnessError::Config(format!("worlds must be in 1..={MAX_WORLDS}, got {}", self.worlds)));
        }
        if self.engine == EngineKind::Alphamu && self.m == 0 {
            return Err(HarnessError::Config("M must be at least 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for EngineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.engine {
            EngineKind::Pimc => write!(f, "pimc worlds={}", self.worlds),
            EngineKind::Alphamu => write!(f, "alphamu M={} worlds={} {}", self.m, self.worlds, self.toggles()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuctionKind {
    /// No auction information: every layout is possible.
    None,
    /// 1NT by South, 3NT by North.
    OneNtThreeNt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuctionConfig {
    pub kind: AuctionKind,
    pub opener_hcp: (u32, u32),
    /// Longest suit the opener may hold; scaled to the deck when absent.
    pub opener_max_suit: Option<u8>,
    pub responder_min_hcp: u32,
}

impl Default for AuctionConfig {
    fn default() -> Self {
        AuctionConfig { kind: AuctionKind::OneNtThreeNt, opener_hcp: (15, 17), opener_max_suit: None, responder_min_hcp: 10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    /// Keep deals whose PIMC win rate lies between the bounds.
    pub low: f64,
    pub high: f64,
    pub playouts: usize,
    /// Worlds per PIMC player in the filter playouts.
    pub worlds: usize,
    /// Candidates drawn per requested deal before giving up.
    pub budget_per_deal: u64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { low: 0.30, high: 0.70, playouts: 8, worlds: 10, budget_per_deal: 200 }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.low >= 0.0 && self.low < self.high && self.high <= 1.0) {
            return Err(HarnessError::Config(format!(
                "filter bounds must satisfy 0 <= low < high <= 1, got ({}, {})",
                self.low, self.high
            )));
        }
        if self.playouts == 0 || self.worlds == 0 || self.worlds > MAX_WORLDS {
            return Err(HarnessError::Config("filter needs playouts >= 1 and 1..=64 worlds".into()));
        }
        Ok(())
    }

    /// Strictly inside the bounds; a bound of 0 or 1 admits its end too,
    /// so `(0, 1)` keeps every deal.
    pub fn accepts(&self, rate: f64) -> bool {
        (rate > self.low || self.low <= 0.0) && (rate < self.high || self.high >= 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatchConfig {
    pub cards: usize,
    /// Tricks South must take; `round(9 * tricks / 13)` when absent.
    pub required_tricks: Option<u8>,
    pub deals: usize,
    pub seed: u64,
    pub defense_worlds: usize,
    /// Resample every player's worlds before each of its decisions instead
    /// of filtering the initial sample.
    pub resample: bool,
    /// Worker threads; all cores when absent.
    pub threads: Option<usize>,
    pub auction: AuctionConfig,
    pub filter: FilterConfig,
    pub engines: Vec<EngineConfig>,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            cards: 24,
            required_tricks: None,
            deals: 100,
            seed: 1,
            defense_worlds: 10,
            resample: false,
            threads: None,
            auction: AuctionConfig::default(),
            filter: FilterConfig::default(),
            engines: vec![EngineConfig::alphamu(1, 10), EngineConfig::alphamu(2, 10), EngineConfig::alphamu(3, 10)],
        }
    }
}

impl MatchConfig {
    pub fn from_toml(text: &str) -> Result<MatchConfig> {
        let config: MatchConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<MatchConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        MatchConfig::from_toml(&text).map_err(|e| match e {
            HarnessError::Config(m) => HarnessError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let deck = Deck::with_cards(self.cards)
            .ok_or_else(|| HarnessError::Config(format!("a deck has 4 to 52 cards in a multiple of 4, got {}", self.cards)))?;
        let total = deck.total_tricks();
        if let Some(r) = self.required_tricks {
            if r == 0 || r > total {
                return Err(HarnessError::Config(format!("required tricks must be in 1..={total}, got {r}")));
            }
        }
        if self.defense_worlds == 0 || self.defense_worlds > MAX_WORLDS {
            return Err(HarnessError::Config(format!("defense worlds must be in 1..={MAX_WORLDS}")));
        }
        let (lo, hi) = self.auction.opener_hcp;
        if lo > hi {
            return Err(HarnessError::Config(format!("opener HCP range {lo}-{hi} is empty")));
        }
        self.filter.validate()?;
        for e in &self.engines {
            e.validate()?;
        }
        Ok(())
    }

    pub fn deck(&self) -> Deck {
        Deck::with_cards(self.cards).expect("validated deck size")
    }

    pub fn contract(&self) -> Contract {
        let total = self.deck().total_tricks();
        let required = self.required_tricks.unwrap_or_else(|| default_required(total));
        Contract::new(Seat::South, required, total).expect("validated contract")
    }

    pub fn constraints(&self) -> ConstraintSet {
        let contract = self.contract();
        let deck = self.deck();
        match self.auction.kind {
            AuctionKind::None => ConstraintSet::none(),
            AuctionKind::OneNtThreeNt => {
                let mut set = ConstraintSet::none();
                let cap = self.auction.opener_max_suit.unwrap_or_else(|| max_suit_len(deck));
                set.seats[contract.declarer.index()] =
                    HandConstraint { hcp: self.auction.opener_hcp, suit_len: [(0, cap); 4] };
                set.seats[contract.dummy().index()] =
                    HandConstraint { hcp: (self.auction.responder_min_hcp, u32::MAX), ..HandConstraint::default() };
                set
            }
        }
    }
}

/// Nine of thirteen scaled to the deck, rounded to nearest.
pub fn default_required(total_tricks: u8) -> u8 {
    ((9 * total_tricks as u32 + 6) / 13) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_standard_auction() {
        let c = MatchConfig { cards: 52, ..MatchConfig::default() };
        assert_eq!(c.contract().required_tricks, 9);
        assert_eq!(c.constraints(), ConstraintSet::one_nt_three_nt(c.contract(), c.deck()));
        assert_eq!(default_required(6), 4);
        assert_eq!(default_required(4), 3);
        assert_eq!(default_required(9), 6);
    }

    #[test]
    fn toml_overrides_only_what_it_names() {
        let c = MatchConfig::from_toml(
            "cards = 16\nseed = 9\n[filter]\nlow = 0.1\n[[engines]]\nengine = \"pimc\"\nworlds = 5\n",
        )
        .unwrap();
        assert_eq!(c.cards, 16);
        assert_eq!(c.filter.low, 0.1);
        assert_eq!(c.filter.high, 0.70);
        assert_eq!(c.engines, vec![EngineConfig::pimc(5)]);
        let back = MatchConfig::from_toml(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_configs_are_rejected() {
        for text in [
            "cards = 30",
            "required_tricks = 9",
            "[filter]\nlow = 0.8\nhigh = 0.2",
            "[filter]\nhigh = 1.5",
            "[[engines]]\nworlds = 65",
            "[[engines]]\nm = 0",
            "typo = 1",
        ] {
            assert!(matches!(MatchConfig::from_toml(text), Err(HarnessError::Config(_))), "{text}");
        }
    }
}
