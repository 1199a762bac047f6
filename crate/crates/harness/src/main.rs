use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alphamu_core::pbn::{format_deal, parse_deal};
use alphamu_core::search::TranspositionTable;
use alphamu_core::tree::{abstract_plain_stats, abstract_tree_deepening, front_of, TreeKind};
use alphamu_core::{Contract, Deal, PlayState, Seat, Solver, Toggles, Tree, World};
use alphamu_harness::config::{EngineConfig, MatchConfig};
use alphamu_harness::deals::{
    candidate_seed, draw_deal, filter_deals, format_deals, generate_deals, generate_filtered_deals, read_deals,
};
use alphamu_harness::duplicate::{bench_engines, play_match_deal, run_duplicate_match, MatchReport};
use alphamu_harness::report::{text_table, write_csv, write_deal_csv};
use alphamu_harness::{HarnessError, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "alphamu", version, about = "αμ declarer play, PIMC and duplicate matches for no-trump Bridge")]
struct Cli {
    /// TOML match configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More logging (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or filter deals.
    #[command(subcommand)]
    Deal(DealCommand),
    /// Play one deal and print the transcript.
    Play(PlayArgs),
    /// Duplicate match of the configured declarer engines.
    Match(MatchArgs),
    /// Double-dummy tricks for a deal.
    Solve(SolveArgs),
    /// Every toggle combination at one depth on the same deals.
    Bench(BenchArgs),
    /// Pareto fronts of an abstract tree fixture.
    Tree(TreeArgs),
}

#[derive(Subcommand)]
enum DealCommand {
    /// Deals fitting the auction.
    Gen(GenArgs),
    /// Deals whose PIMC win rate is inside the filter bounds.
    Filter(FilterArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Deck size: 4 to 52 cards, a multiple of 4.
    #[arg(long)]
    cards: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for matches and filtering.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    #[command(flatten)]
    common: Common,
    /// Judge these deals instead of generating candidates.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long)]
    low: Option<f64>,
    #[arg(long)]
    high: Option<f64>,
    #[arg(long)]
    playouts: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        matches!(self, Switch::On)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Alphamu,
    Pimc,
}

#[derive(Args, Clone)]
struct EngineArgs {
    #[arg(long, value_enum, default_value = "alphamu")]
    engine: Engine,
    #[arg(long = "M", short = 'M', default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 10)]
    worlds: usize,
    #[arg(long, value_enum, default_value = "on")]
    tt: Switch,
    #[arg(long, value_enum, default_value = "on")]
    early_cut: Switch,
    #[arg(long, value_enum, default_value = "on")]
    root_cut: Switch,
}

impl EngineArgs {
    fn engine(&self) -> EngineConfig {
        let base = match self.engine {
            Engine::Alphamu => EngineConfig::alphamu(self.m, self.worlds),
            Engine::Pimc => EngineConfig::pimc(self.worlds),
        };
        base.with_toggles(Toggles { tt: self.tt.on(), early_cut: self.early_cut.on(), root_cut: self.root_cut.on() })
    }
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    engine: EngineArgs,
    /// Deal as `N:... E:... S:... W:...`; drawn from the seed when absent.
    #[arg(long)]
    deal: Option<String>,
    /// Index of the deal in a match, which fixes the defense's seeds.
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Args)]
struct DealSource {
    /// Deal file; filtered deals are generated when absent.
    #[arg(long)]
    deals: Option<PathBuf>,
    /// Deals to generate.
    #[arg(long)]
    count: Option<usize>,
    /// Generate without the win-rate filter.
    #[arg(long)]
    unfiltered: bool,
}

#[derive(Args)]
struct Output {
    /// Configuration rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Per-deal results as CSV.
    #[arg(long)]
    deal_csv: Option<PathBuf>,
    /// Zero every clock reading so runs can be compared byte for byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct MatchArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    source: DealSource,
    #[command(flatten)]
    output: Output,
    /// Declarer worlds for every configured engine.
    #[arg(long)]
    worlds: Option<usize>,
    /// Depths to compare, e.g. `--depths 1,2,3`; replaces the configured engines.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<u32>>,
    /// Add a PIMC declarer row.
    #[arg(long)]
    with_pimc: bool,
    /// Resample worlds before every decision.
    #[arg(long)]
    resample: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    source: DealSource,
    #[command(flatten)]
    output: Output,
    #[arg(long = "M", short = 'M', default_value_t = 3)]
    m: u32,
    #[arg(long, default_value_t = 10)]
    worlds: usize,
}

#[derive(Args)]
struct SolveArgs {
    /// Deal as `N:... E:... S:... W:...`.
    deal: String,
    #[arg(long, default_value = "S")]
    declarer: String,
    /// Opening leader; left of declarer when absent.
    #[arg(long)]
    leader: Option<String>,
}

#[derive(Args)]
struct TreeArgs {
    /// Fixture file.
    file: PathBuf,
    /// Max moves of lookahead; the whole tree when absent.
    #[arg(long)]
    depth: Option<u32>,
    /// Print the front of every inner node.
    #[arg(long)]
    all: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let base = match &cli.config {
        Some(path) => MatchConfig::load(path)?,
        None => MatchConfig::default(),
    };
    match cli.command {
        Command::Deal(DealCommand::Gen(a)) => {
            let config = with_common(base, &a.common)?;
            emit_deals(&generate_deals(&config, a.count)?, a.out.as_deref())
        }
        Command::Deal(DealCommand::Filter(a)) => deal_filter(with_common(base, &a.common)?, a),
        Command::Play(a) => play(with_common(base, &a.common)?, a),
        Command::Match(a) => {
            let mut config = with_common(base, &a.common)?;
            config.resample |= a.resample;
            let worlds = a.worlds.unwrap_or_else(|| config.engines.first().map_or(10, |e| e.worlds));
            if let Some(depths) = &a.depths {
                config.engines = depths.iter().map(|&m| EngineConfig::alphamu(m, worlds)).collect();
            } else if a.worlds.is_some() {
                config.engines.iter_mut().for_each(|e| e.worlds = worlds);
            }
            if a.with_pimc {
                config.engines.insert(0, EngineConfig::pimc(worlds));
            }
            config.validate()?;
            let deals = match_deals(&config, &a.source)?;
            let report = run_duplicate_match(&config, &deals)?;
            emit_report(&report, &a.output)
        }
        Command::Bench(a) => {
            let mut config = with_common(base, &a.common)?;
            config.engines = bench_engines(a.m, a.worlds);
            config.validate()?;
            let deals = match_deals(&config, &a.source)?;
            let report = run_duplicate_match(&config, &deals)?;
            emit_report(&report, &a.output)
        }
        Command::Solve(a) => solve(a),
        Command::Tree(a) => tree(a),
    }
}

fn with_common(mut config: MatchConfig, c: &Common) -> Result<MatchConfig> {
    if let Some(cards) = c.cards {
        config.cards = cards;
    }
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    if c.threads.is_some() {
        config.threads = c.threads;
    }
    config.validate()?;
    Ok(config)
}

fn emit_deals(deals: &[Deal], out: Option<&Path>) -> Result<()> {
    let text = format_deals(deals);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| HarnessError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn deal_filter(mut config: MatchConfig, a: FilterArgs) -> Result<()> {
    config.filter.low = a.low.unwrap_or(config.filter.low);
    config.filter.high = a.high.unwrap_or(config.filter.high);
    config.filter.playouts = a.playouts.unwrap_or(config.filter.playouts);
    config.validate()?;
    match &a.input {
        Some(path) => {
            let deals = read_deals(path)?;
            let verdicts = filter_deals(&config, &deals)?;
            let kept: Vec<Deal> = deals.iter().zip(&verdicts).filter(|(_, v)| v.1).map(|(d, _)| *d).collect();
            for (d, (rate, keep)) in deals.iter().zip(&verdicts) {
                log::info!("{} {:.3} {}", format_deal(d), rate, if *keep { "keep" } else { "drop" });
            }
            eprintln!("kept {} of {} deals", kept.len(), deals.len());
            emit_deals(&kept, a.out.as_deref())
        }
        None => {
            let (deals, stats) = generate_filtered_deals(&config, a.count)?;
            eprintln!(
                "kept {} of {} candidates ({} failed the auction, {} the filter)",
                deals.len(),
                stats.candidates,
                stats.rejected_by_auction,
                stats.rejected_by_filter
            );
            emit_deals(&deals, a.out.as_deref())
        }
    }
}

fn play(config: MatchConfig, a: PlayArgs) -> Result<()> {
    let engine = a.engine.engine();
    let config = MatchConfig { engines: vec![engine], ..config };
    config.validate()?;
    let deal = match &a.deal {
        Some(text) => {
            let deal = parse_deal(text).map_err(|e| HarnessError::Input(e.to_string()))?;
            if deal.deck().size() != config.cards {
                return Err(HarnessError::Input(format!(
                    "deal has {} cards but the config says {}; pass --cards",
                    deal.deck().size(),
                    config.cards
                )));
            }
            deal
        }
        None => draw_deal(&config, candidate_seed(config.seed, a.index as u64))
            .ok_or_else(|| HarnessError::Input("no deal fits the auction".into()))?,
    };
    let record = play_match_deal(&config, &deal, a.index, &engine)?;
    println!("{}", format_deal(&deal));
    println!("{engine}; South needs {} of {}", config.contract().required_tricks, config.deck().total_tricks());
    print!("{}", record.transcript_text());
    for d in record.decisions.iter().filter(|d| !d.forced) {
        let note = if d.is_discrepancy() { format!(" (depth one: {})", d.first_iteration) } else { String::new() };
        println!("  {} {}{} {:.3} ms, {} nodes", d.seat, d.card, note, d.micros as f64 / 1000.0, d.stats.nodes());
    }
    Ok(())
}

fn match_deals(config: &MatchConfig, source: &DealSource) -> Result<Vec<Deal>> {
    let count = source.count.unwrap_or(config.deals);
    let deals = match &source.deals {
        Some(path) => {
            let deals = read_deals(path)?;
            if let Some(d) = deals.iter().find(|d| d.deck().size() != config.cards) {
                return Err(HarnessError::Input(format!(
                    "{} has a {}-card deal but the config says {}",
                    path.display(),
                    d.deck().size(),
                    config.cards
                )));
            }
            deals.into_iter().take(count).collect()
        }
        None if source.unfiltered => generate_deals(config, count)?,
        None => generate_filtered_deals(config, count)?.0,
    };
    Ok(deals)
}

fn emit_report(report: &MatchReport, out: &Output) -> Result<()> {
    let report = if out.no_timing { report.without_timing() } else { report.clone() };
    print!("{}", text_table(&report));
    if let Some(path) = &out.csv {
        let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
        write_csv(&report, file)?;
    }
    if let Some(path) = &out.deal_csv {
        let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
        write_deal_csv(&report, file)?;
    }
    std::io::stdout().flush().map_err(|e| HarnessError::io("<stdout>", e))
}

fn seat_arg(text: &str) -> Result<Seat> {
    let mut chars = text.chars();
    match (chars.next().and_then(|c| Seat::from_letter(c.to_ascii_uppercase())), chars.next()) {
        (Some(s), None) => Ok(s),
        _ => Err(HarnessError::Input(format!("`{text}` is not a seat (N, E, S or W)"))),
    }
}

fn solve(a: SolveArgs) -> Result<()> {
    let deal = parse_deal(&a.deal).map_err(|e| HarnessError::Input(e.to_string()))?;
    let declarer = seat_arg(&a.declarer)?;
    let leader = match &a.leader {
        Some(l) => seat_arg(l)?,
        None => declarer.next(),
    };
    let total = deal.deck().total_tricks();
    let contract = Contract::new(declarer, total, total).expect("valid contract");
    let state = PlayState::from_position(contract, total, leader, 0, 0);
    let world = World::new(*deal.hands());
    let mut solver = Solver::default();
    let tricks = solver.max_tricks(&world, &state);
    println!("{}", format_deal(&deal));
    println!("{declarer} declaring, {leader} leads: declarer side takes {tricks} of {total}");
    Ok(())
}

fn tree(a: TreeArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.file).map_err(|e| HarnessError::io(&a.file, e))?;
    let tree = Tree::parse(&text).map_err(|e| HarnessError::Input(format!("{}: {e}", a.file.display())))?;
    let depth = a.depth.unwrap_or_else(|| tree.max_height()).max(1);
    let (front, stats) = abstract_plain_stats(&tree, depth);
    println!("root {front}  mu {}", front.mu());
    if tree.nodes()[0].kind == TreeKind::Max {
        let mut tt = TranspositionTable::new();
        let deep = abstract_tree_deepening(&tree, depth, Toggles::ALL_ON, &mut tt);
        println!(
            "{} nodes plain, {} with cuts and table; {} early cuts, {} root cuts",
            stats.nodes(),
            deep.stats.nodes(),
            deep.stats.early_cuts,
            deep.stats.root_cuts
        );
    }
    if a.all {
        for (id, node) in tree.nodes().iter().enumerate() {
            if !matches!(node.kind, TreeKind::Leaf(_)) {
                println!("{} {}", node_name(node, id), front_of(&tree, id));
            }
        }
    }
    Ok(())
}

fn node_name(node: &alphamu_core::tree::TreeNode, id: usize) -> String {
    node.label.clone().unwrap_or_else(|| format!("#{id}"))
}
