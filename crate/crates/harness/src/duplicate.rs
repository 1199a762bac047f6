//! Duplicate matches: every declarer configuration plays the same deals
//! against the same PIMC defense.

use alphamu_core::pbn::format_deal;
use alphamu_core::{Deal, SearchStats, Toggles};
use rayon::prelude::*;

use crate::config::{EngineConfig, MatchConfig};
use crate::deals::table_for;
use crate::error::{HarnessError, Result};
use crate::game::{play_deal, GameRecord};
use crate::seeds::deal_seed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSummary {
    pub made: bool,
    pub declarer_tricks: u8,
    pub decisions: usize,
    pub discrepancies: usize,
    pub decision_micros: u64,
    pub stats: SearchStats,
    pub resamples: u32,
}

impl From<&GameRecord> for GameSummary {
    fn from(g: &GameRecord) -> GameSummary {
        GameSummary {
            made: g.made,
            declarer_tricks: g.declarer_tricks,
            decisions: g.decision_count(),
            discrepancies: g.discrepancies(),
            decision_micros: g.decision_micros(),
            stats: g.stats(),
            resamples: g.resamples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DealResult {
    pub index: usize,
    pub seed: u64,
    pub deal: String,
    /// One game per configuration, in configuration order.
    pub games: Vec<GameSummary>,
}

/// Totals for one declarer configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigRow {
    pub cards: usize,
    pub engine: EngineConfig,
    pub deals: usize,
    pub made: usize,
    pub decisions: usize,
    pub discrepancies: usize,
    pub decision_micros: u64,
    pub nodes: u64,
    pub dd_calls: u64,
}

impl ConfigRow {
    pub fn score_pct(&self) -> f64 {
        if self.deals == 0 {
            0.0
        } else {
            100.0 * self.made as f64 / self.deals as f64
        }
    }

    pub fn mean_time_ms(&self) -> f64 {
        if self.decisions == 0 {
            0.0
        } else {
            self.decision_micros as f64 / 1000.0 / self.decisions as f64
        }
    }

    pub fn discrepancy_rate(&self) -> f64 {
        if self.decisions == 0 {
            0.0
        } else {
            self.discrepancies as f64 / self.decisions as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchReport {
    pub cards: usize,
    pub engines: Vec<EngineConfig>,
    pub deals: Vec<DealResult>,
    pub rows: Vec<ConfigRow>,
}

impl MatchReport {
    pub fn new(cards: usize, engines: Vec<EngineConfig>, deals: Vec<DealResult>) -> MatchReport {
        let rows = engines
            .iter()
            .enumerate()
            .map(|(k, &engine)| {
                let mut row = ConfigRow {
                    cards,
                    engine,
                    deals: deals.len(),
                    made: 0,
                    decisions: 0,
                    discrepancies: 0,
                    decision_micros: 0,
                    nodes: 0,
                    dd_calls: 0,
                };
                for g in deals.iter().map(|d| &d.games[k]) {
                    row.made += g.made as usize;
                    row.decisions += g.decisions;
                    row.discrepancies += g.discrepancies;
                    row.decision_micros += g.decision_micros;
                    row.nodes += g.stats.nodes();
                    row.dd_calls += g.stats.dd_calls;
                }
                row
            })
            .collect();
        MatchReport { cards, engines, deals, rows }
    }

    /// The report with every clock reading set to zero, for comparing runs.
    pub fn without_timing(&self) -> MatchReport {
        let mut deals = self.deals.clone();
        for g in deals.iter_mut().flat_map(|d| d.games.iter_mut()) {
            g.decision_micros = 0;
            g.stats.elapsed_micros = 0;
        }
        MatchReport::new(self.cards, self.engines.clone(), deals)
    }

    pub fn row(&self, engine: &EngineConfig) -> Option<&ConfigRow> {
        self.rows.iter().find(|r| r.engine == *engine)
    }
}

/// Plays deal `index` of a match with one engine; the same call replays it.
pub fn play_match_deal(config: &MatchConfig, deal: &Deal, index: usize, engine: &EngineConfig) -> Result<GameRecord> {
    let seed = deal_seed(config.seed, index);
    play_deal(&table_for(config, deal), engine, seed).map_err(|source| HarnessError::Engine { index, seed, source })
}

/// Runs every configuration of `config.engines` on every deal. Deals run
/// in parallel; results are merged in deal order, so the report does not
/// depend on the thread count apart from timings.
pub fn run_duplicate_match(config: &MatchConfig, deals: &[Deal]) -> Result<MatchReport> {
    let run = || -> Result<Vec<DealResult>> {
        deals
            .par_iter()
            .enumerate()
            .map(|(index, deal)| {
                let games = config
                    .engines
                    .iter()
                    .map(|e| play_match_deal(config, deal, index, e).map(|g| GameSummary::from(&g)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DealResult { index, seed: deal_seed(config.seed, index), deal: format_deal(deal), games })
            })
            .collect()
    };
    let results = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(MatchReport::new(config.cards, config.engines.clone(), results))
}

/// Every toggle combination at depth `m`, starting with all off.
pub fn bench_engines(m: u32, worlds: usize) -> Vec<EngineConfig> {
    Toggles::combinations().iter().map(|&t| EngineConfig::alphamu(m, worlds).with_toggles(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deals::generate_deals;

    #[test]
    fn rows_add_up_the_deals() {
        let config = MatchConfig {
            cards: 16,
            deals: 4,
            engines: vec![EngineConfig::pimc(6), EngineConfig::alphamu(1, 6), EngineConfig::alphamu(2, 6)],
            ..MatchConfig::default()
        };
        let deals = generate_deals(&config, 4).unwrap();
        let report = run_duplicate_match(&config, &deals).unwrap();
        assert_eq!(report.rows.len(), 3);
        for (k, row) in report.rows.iter().enumerate() {
            let made = report.deals.iter().filter(|d| d.games[k].made).count();
            assert_eq!(row.made, made);
            assert_eq!(row.score_pct(), 100.0 * made as f64 / 4.0);
        }
        // PIMC and αμ at one Max move are the same player
        let strip = report.without_timing();
        for d in &strip.deals {
            assert_eq!(d.games[0].made, d.games[1].made);
            assert_eq!(d.games[0].declarer_tricks, d.games[1].declarer_tricks);
        }
        assert_eq!(report.rows[1].discrepancies, 0);
    }
}
