//! Deal generation under the auction constraints, the PIMC win-rate filter
//! and PBN deal files.

use std::path::Path;

use alphamu_core::pbn::{format_deal, parse_deal};
use alphamu_core::worlds::{is_consistent, random_deal, REJECTION_BUDGET};
use alphamu_core::{Deal, PlayState, World};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{EngineConfig, MatchConfig};
use crate::error::{HarnessError, Result};
use crate::game::{play_deal, Table};
use crate::seeds::{derive, playout_seed};

/// Stream of candidate seeds, kept apart from the match's deal seeds.
const CANDIDATE_STREAM: u64 = u64::MAX;

pub fn candidate_seed(master: u64, index: u64) -> u64 {
    derive(derive(master, CANDIDATE_STREAM), index)
}

/// Draws deals from `seed` until one fits the auction. `None` after
/// [`REJECTION_BUDGET`] draws.
pub fn draw_deal(config: &MatchConfig, seed: u64) -> Option<Deal> {
    let deck = config.deck();
    let start = PlayState::new(config.contract(), deck);
    let constraints = config.constraints();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..REJECTION_BUDGET)
        .map(|_| random_deal(deck, &mut rng))
        .find(|d| is_consistent(&World::new(*d.hands()), &start, &constraints))
}

/// `n` deals fitting the auction, without the win-rate filter.
pub fn generate_deals(config: &MatchConfig, n: usize) -> Result<Vec<Deal>> {
    let mut out = Vec::with_capacity(n);
    let mut misses = 0;
    let mut i = 0u64;
    while out.len() < n {
        match draw_deal(config, candidate_seed(config.seed, i)) {
            Some(d) => out.push(d),
            None => {
                misses += 1;
                if misses > 16 {
                    return Err(HarnessError::GenerationExhausted {
                        candidates: i + 1,
                        accepted: out.len(),
                        rejected_by_auction: misses,
                        rejected_by_filter: 0,
                    });
                }
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Fraction of `filter.playouts` PIMC-against-PIMC playouts the declarer
/// makes. Playout `j` uses its own seed derived from `seed`.
pub fn pimc_win_rate(config: &MatchConfig, deal: &Deal, seed: u64) -> std::result::Result<f64, alphamu_core::WorldError> {
    let table = table_for(config, deal);
    let engine = EngineConfig::pimc(config.filter.worlds);
    let table = Table { defense_worlds: config.filter.worlds, ..table };
    let mut made = 0;
    for j in 0..config.filter.playouts {
        if play_deal(&table, &engine, playout_seed(seed, j))?.made {
            made += 1;
        }
    }
    Ok(made as f64 / config.filter.playouts as f64)
}

pub fn table_for<'a>(config: &MatchConfig, deal: &'a Deal) -> Table<'a> {
    Table {
        deal,
        contract: config.contract(),
        constraints: config.constraints(),
        defense_worlds: config.defense_worlds,
        resample: config.resample,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FilterStats {
    pub candidates: u64,
    pub rejected_by_auction: u64,
    pub rejected_by_filter: u64,
}

/// `n` deals fitting the auction whose PIMC win rate lies strictly inside
/// the filter bounds. Candidates are scored in parallel in fixed-size
/// batches and taken in index order, so the result depends only on the
/// master seed.
pub fn generate_filtered_deals(config: &MatchConfig, n: usize) -> Result<(Vec<Deal>, FilterStats)> {
    const BATCH: u64 = 32;
    let budget = config.filter.budget_per_deal.saturating_mul(n as u64).max(BATCH);
    let mut stats = FilterStats::default();
    let mut out = Vec::with_capacity(n);
    let mut next = 0u64;
    while out.len() < n {
        if next >= budget {
            return Err(HarnessError::GenerationExhausted {
                candidates: stats.candidates,
                accepted: out.len(),
                rejected_by_auction: stats.rejected_by_auction,
                rejected_by_filter: stats.rejected_by_filter,
            });
        }
        let batch: Vec<(u64, Option<(Deal, bool)>)> = (next..next + BATCH)
            .into_par_iter()
            .map(|i| {
                let seed = candidate_seed(config.seed, i);
                let judged = draw_deal(config, seed).map(|deal| {
                    // a sampling failure counts against the deal
                    let keep = pimc_win_rate(config, &deal, seed).map(|r| config.filter.accepts(r)).unwrap_or(false);
                    (deal, keep)
                });
                (i, judged)
            })
            .collect();
        next += BATCH;
        for (_, judged) in batch {
            if out.len() == n {
                break;
            }
            stats.candidates += 1;
            match judged {
                None => stats.rejected_by_auction += 1,
                Some((_, false)) => stats.rejected_by_filter += 1,
                Some((deal, true)) => out.push(deal),
            }
        }
    }
    log::info!(
        "kept {} of {} candidates ({} failed the auction, {} the filter)",
        out.len(),
        stats.candidates,
        stats.rejected_by_auction,
        stats.rejected_by_filter
    );
    Ok((out, stats))
}

/// Win rate and verdict for each given deal. Deal `i` is judged with
/// playout seeds derived from `candidate_seed(master, i)`.
pub fn filter_deals(config: &MatchConfig, deals: &[Deal]) -> Result<Vec<(f64, bool)>> {
    deals
        .par_iter()
        .enumerate()
        .map(|(i, deal)| {
            let seed = candidate_seed(config.seed, i as u64);
            let rate = pimc_win_rate(config, deal, seed).map_err(|source| HarnessError::Engine { index: i, seed, source })?;
            Ok((rate, config.filter.accepts(rate)))
        })
        .collect()
}

/// One deal per line, `N:... E:... S:... W:...`, or PBN `[Deal "..."]`
/// tags. Blank lines and `#` or `%` comments are skipped.
pub fn parse_deal_file(text: &str, path: &Path) -> Result<Vec<Deal>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let body = match line.strip_prefix("[Deal \"") {
            Some(rest) => rest.strip_suffix("\"]").unwrap_or(rest),
            None if line.starts_with('[') => continue,
            None => line,
        };
        let deal = parse_deal(body).map_err(|e| HarnessError::DealFile {
            path: path.to_path_buf(),
            line: n + 1,
            message: e.to_string(),
        })?;
        out.push(deal);
    }
    Ok(out)
}

pub fn read_deals(path: &Path) -> Result<Vec<Deal>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_deal_file(&text, path)
}

pub fn format_deals(deals: &[Deal]) -> String {
    deals.iter().map(|d| format_deal(d) + "\n").collect()
}

pub fn write_deals(path: &Path, deals: &[Deal]) -> Result<()> {
    std::fs::write(path, format_deals(deals)).map_err(|e| HarnessError::io(path, e))
}
