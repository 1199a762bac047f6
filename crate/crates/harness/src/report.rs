//! CSV and text renderings of a [`MatchReport`].

use std::fmt::Write as _;
use std::io::Write;

use crate::config::EngineKind;
use crate::duplicate::{ConfigRow, MatchReport};
use crate::error::Result;

pub const CSV_HEADER: [&str; 10] =
    ["cards", "M", "worlds", "tt", "rootcut", "earlycut", "discrepancies", "decisions", "score_pct", "mean_time_ms"];

fn flag(row: &ConfigRow, on: bool) -> &'static str {
    match (row.engine.engine, on) {
        (EngineKind::Pimc, _) => "-",
        (_, true) => "on",
        (_, false) => "off",
    }
}

/// One row per configuration under [`CSV_HEADER`].
pub fn write_csv<W: Write>(report: &MatchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in &report.rows {
        w.write_record([
            row.cards.to_string(),
            row.engine.depth().to_string(),
            row.engine.worlds.to_string(),
            flag(row, row.engine.tt).to_string(),
            flag(row, row.engine.root_cut).to_string(),
            flag(row, row.engine.early_cut).to_string(),
            row.discrepancies.to_string(),
            row.decisions.to_string(),
            format!("{:.2}", row.score_pct()),
            format!("{:.3}", row.mean_time_ms()),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn csv_string(report: &MatchReport) -> String {
    let mut buf = Vec::new();
    write_csv(report, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Per-deal results, one line per deal and configuration.
pub fn write_deal_csv<W: Write>(report: &MatchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["deal", "seed", "engine", "made", "tricks", "decisions", "discrepancies", "time_ms", "pbn"])?;
    for d in &report.deals {
        for (engine, g) in report.engines.iter().zip(&d.games) {
            w.write_record([
                d.index.to_string(),
                format!("{:#018x}", d.seed),
                engine.to_string(),
                (g.made as u8).to_string(),
                g.declarer_tricks.to_string(),
                g.decisions.to_string(),
                g.discrepancies.to_string(),
                format!("{:.3}", g.decision_micros as f64 / 1000.0),
                d.deal.clone(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Aligned table: score and discrepancies per configuration, then the
/// search effort.
pub fn text_table(report: &MatchReport) -> String {
    let mut out = String::new();
    let deals = report.deals.len();
    let _ = writeln!(out, "{} deals, {} cards", deals, report.cards);
    let _ = writeln!(
        out,
        "{:<7} {:>2} {:>6} {:>3} {:>3} {:>3} {:>15} {:>7} {:>10} {:>12} {:>12}",
        "engine", "M", "worlds", "TT", "R", "E", "discrepancies", "score", "ms/move", "nodes", "solver calls"
    );
    for row in &report.rows {
        let name = match row.engine.engine {
            EngineKind::Pimc => "pimc",
            EngineKind::Alphamu => "alphamu",
        };
        let _ = writeln!(
            out,
            "{:<7} {:>2} {:>6} {:>3} {:>3} {:>3} {:>15} {:>6.1}% {:>10.3} {:>12} {:>12}",
            name,
            row.engine.depth(),
            row.engine.worlds,
            flag(row, row.engine.tt),
            flag(row, row.engine.root_cut),
            flag(row, row.engine.early_cut),
            format!("{} / {}", row.discrepancies, row.decisions),
            row.score_pct(),
            row.mean_time_ms(),
            row.nodes,
            row.dd_calls,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EngineConfig;
    use crate::duplicate::{DealResult, GameSummary};
    use alphamu_core::SearchStats;

    fn game(made: bool, decisions: usize, discrepancies: usize) -> GameSummary {
        GameSummary {
            made,
            declarer_tricks: 3,
            decisions,
            discrepancies,
            decision_micros: 1500 * decisions as u64,
            stats: SearchStats::default(),
            resamples: 0,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = MatchReport::new(24, vec![], vec![]);
        assert_eq!(csv_string(&r), "cards,M,worlds,tt,rootcut,earlycut,discrepancies,decisions,score_pct,mean_time_ms\n");
    }

    #[test]
    fn csv_rows_follow_the_deals() {
        let engines = vec![EngineConfig::pimc(10), EngineConfig::alphamu(2, 10)];
        let deals = (0..4)
            .map(|i| DealResult {
                index: i,
                seed: i as u64,
                deal: String::new(),
                games: vec![game(i < 1, 5, 0), game(i < 3, 5, (i == 2) as usize)],
            })
            .collect();
        let r = MatchReport::new(24, engines, deals);
        let text = csv_string(&r);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "24,1,10,-,-,-,0,20,25.00,1.500");
        assert_eq!(lines[2], "24,2,10,on,on,on,1,20,75.00,1.500");
        // score recomputed from the per-deal rows
        let mut buf = Vec::new();
        write_deal_csv(&r, &mut buf).unwrap();
        let mut rd = csv::Reader::from_reader(&buf[..]);
        let made: usize = rd
            .records()
            .map(|rec| rec.unwrap())
            .filter(|rec| rec[2].starts_with("alphamu"))
            .map(|rec| rec[3].parse::<usize>().unwrap())
            .sum();
        assert_eq!(100.0 * made as f64 / 4.0, r.rows[1].score_pct());
        assert!(text_table(&r).contains("1 / 20"));
    }
}
