//! αμ search over Pareto fronts.
//!
//! The engine is generic over a [`SearchSpace`], so the Bridge play model
//! and explicit test trees run the same Max/Min folding code. Worlds are a
//! bit mask over the caller's world list.
//!
//! `M` counts the remaining Max moves: Max nodes pass `M - 1` to their
//! children, Min nodes pass `M` unchanged, and a node reached with `M = 0`
//! is scored world by world with perfect information.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::pareto::{OutcomeVector, ParetoFront, Score};

/// A game seen through possible worlds.
pub trait SearchSpace {
    type Node: Clone;
    type Move: Copy + Eq + fmt::Debug;
    type Key: Ord + Clone;

    fn is_max(&self, node: &Self::Node) -> bool;

    /// Transposition key. Two nodes with the same key must have the same
    /// value over the same worlds.
    fn key(&self, node: &Self::Node) -> Self::Key;

    /// Outcome when nothing played from here can change it.
    fn decided(&mut self, node: &Self::Node, worlds: u64) -> Option<OutcomeVector>;

    /// Per-world perfect-information value.
    fn evaluate(&mut self, node: &Self::Node, worlds: u64) -> OutcomeVector;

    /// Moves legal in at least one of `worlds`, each paired with the worlds
    /// where it is legal, in canonical order.
    fn moves(&mut self, node: &Self::Node, worlds: u64, out: &mut Vec<(Self::Move, u64)>);

    fn play(&self, node: &Self::Node, mv: Self::Move) -> Self::Node;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Deepest iteration, in Max moves.
    pub max_depth: u32,
    pub world_count: usize,
    pub use_tt: bool,
    pub use_early_cut: bool,
    pub use_root_cut: bool,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(max_depth: u32, world_count: usize) -> SearchConfig {
        assert!(max_depth >= 1, "M must be at least 1");
        SearchConfig { max_depth, world_count, use_tt: true, use_early_cut: true, use_root_cut: true, seed: 0 }
    }

    pub fn with_toggles(mut self, toggles: Toggles) -> SearchConfig {
        self.use_tt = toggles.tt;
        self.use_early_cut = toggles.early_cut;
        self.use_root_cut = toggles.root_cut;
        self
    }

    pub fn toggles(&self) -> Toggles {
        Toggles { tt: self.use_tt, early_cut: self.use_early_cut, root_cut: self.use_root_cut }
    }
}

/// The three optimizations that can be switched off independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Toggles {
    pub tt: bool,
    pub early_cut: bool,
    pub root_cut: bool,
}

impl Toggles {
    pub const ALL_ON: Toggles = Toggles { tt: true, early_cut: true, root_cut: true };
    pub const ALL_OFF: Toggles = Toggles { tt: false, early_cut: false, root_cut: false };

    /// All eight combinations, all-off first.
    pub fn combinations() -> [Toggles; 8] {
        let mut out = [Toggles::ALL_OFF; 8];
        for (i, t) in out.iter_mut().enumerate() {
            *t = Toggles { tt: i & 1 != 0, early_cut: i & 2 != 0, root_cut: i & 4 != 0 };
        }
        out
    }
}

impl fmt::Display for Toggles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let on = |b: bool| if b { "on" } else { "off" };
        write!(f, "tt={} early-cut={} root-cut={}", on(self.tt), on(self.early_cut), on(self.root_cut))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub max_nodes: u64,
    pub min_nodes: u64,
    pub leaf_nodes: u64,
    /// Per-world perfect-information evaluations.
    pub dd_calls: u64,
    pub early_cuts: u64,
    pub root_cuts: u64,
    pub tt_hits: u64,
    /// Wall-clock time, filled in by callers that have a clock.
    pub elapsed_micros: u64,
}

impl SearchStats {
    pub fn nodes(&self) -> u64 {
        self.max_nodes + self.min_nodes + self.leaf_nodes
    }

    pub fn add(&mut self, other: &SearchStats) {
        self.max_nodes += other.max_nodes;
        self.min_nodes += other.min_nodes;
        self.leaf_nodes += other.leaf_nodes;
        self.dd_calls += other.dd_calls;
        self.early_cuts += other.early_cuts;
        self.root_cuts += other.root_cuts;
        self.tt_hits += other.tt_hits;
        self.elapsed_micros += other.elapsed_micros;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtEntry<M> {
    /// `M` of the search that produced `front`.
    pub depth: u32,
    pub front: ParetoFront,
    pub best_move: Option<M>,
}

/// Fronts of completed nodes, keyed by node. Entries are only meaningful
/// for one world list; [`prepare`](Self::prepare) clears the table when the
/// list changes.
pub struct TranspositionTable<K, M> {
    entries: BTreeMap<K, TtEntry<M>>,
    tag: Option<u64>,
}

impl<K: Ord, M> Default for TranspositionTable<K, M> {
    fn default() -> Self {
        TranspositionTable { entries: BTreeMap::new(), tag: None }
    }
}

impl<K: Ord, M: Copy> TranspositionTable<K, M> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds the table to the world list identified by `tag`.
    pub fn prepare(&mut self, tag: u64) {
        if self.tag != Some(tag) {
            self.entries.clear();
            self.tag = Some(tag);
        }
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.tag = None;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&TtEntry<M>> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: K, entry: TtEntry<M>) {
        debug_assert!(!entry.front.is_empty(), "empty fronts are never stored");
        self.entries.insert(key, entry);
    }
}

pub type SpaceTable<S> = TranspositionTable<<S as SearchSpace>::Key, <S as SearchSpace>::Move>;

/// Stops the search: decided positions, then the depth limit.
pub fn stop<S: SearchSpace>(space: &mut S, node: &S::Node, m: u32, worlds: u64) -> Option<OutcomeVector> {
    debug_assert!(worlds != 0, "no world left");
    if let Some(v) = space.decided(node, worlds) {
        return Some(v);
    }
    (m == 0).then(|| space.evaluate(node, worlds))
}

/// Search without cuts or transposition table.
pub fn alphamu_plain<S: SearchSpace>(space: &mut S, node: &S::Node, m: u32, worlds: u64) -> ParetoFront {
    let mut stats = SearchStats::default();
    plain(space, node, m, worlds, &mut stats)
}

pub fn alphamu_plain_with_stats<S: SearchSpace>(
    space: &mut S,
    node: &S::Node,
    m: u32,
    worlds: u64,
    stats: &mut SearchStats,
) -> ParetoFront {
    plain(space, node, m, worlds, stats)
}

fn plain<S: SearchSpace>(space: &mut S, node: &S::Node, m: u32, worlds: u64, stats: &mut SearchStats) -> ParetoFront {
    if let Some(v) = stop_counted(space, node, m, worlds, stats) {
        return ParetoFront::singleton(v);
    }
    let mut moves = Vec::new();
    space.moves(node, worlds, &mut moves);
    let mut front = ParetoFront::empty();
    if space.is_max(node) {
        stats.max_nodes += 1;
        for (mv, w1) in moves {
            let child = space.play(node, mv);
            let f = plain(space, &child, m - 1, w1, stats);
            front.max_assign(&f);
        }
    } else {
        stats.min_nodes += 1;
        for (mv, w1) in moves {
            let child = space.play(node, mv);
            let f = plain(space, &child, m, w1, stats).lift(worlds);
            front = front.min_fronts(&f);
        }
    }
    front
}

fn stop_counted<S: SearchSpace>(
    space: &mut S,
    node: &S::Node,
    m: u32,
    worlds: u64,
    stats: &mut SearchStats,
) -> Option<OutcomeVector> {
    if let Some(v) = space.decided(node, worlds) {
        stats.leaf_nodes += 1;
        return Some(v);
    }
    if m == 0 {
        stats.leaf_nodes += 1;
        stats.dd_calls += worlds.count_ones() as u64;
        return Some(space.evaluate(node, worlds));
    }
    None
}

/// Knobs of one [`alphamu`] call below the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeOptions {
    pub use_tt: bool,
    pub use_early_cut: bool,
}

/// Search with transposition table and early cuts. `alpha` is the running
/// front of the enclosing Max node (or empty). A Min node whose front is
/// already dominated by `alpha` returns the empty front.
pub fn alphamu<S: SearchSpace>(
    space: &mut S,
    node: &S::Node,
    m: u32,
    worlds: u64,
    alpha: &ParetoFront,
    tt: &mut SpaceTable<S>,
    options: NodeOptions,
    stats: &mut SearchStats,
) -> ParetoFront {
    let mut engine = Engine { space, tt, options, stats };
    engine.search(node, m, worlds, alpha)
}

struct Engine<'a, S: SearchSpace> {
    space: &'a mut S,
    tt: &'a mut SpaceTable<S>,
    options: NodeOptions,
    stats: &'a mut SearchStats,
}

impl<S: SearchSpace> Engine<'_, S> {
    /// Entry usable at depth `m` over `worlds`: same worlds, and not from a
    /// deeper search (a shallower front is optimistic for Max).
    fn entry(&self, key: &S::Key, m: u32, worlds: u64) -> Option<TtEntry<S::Move>> {
        if !self.options.use_tt {
            return None;
        }
        self.tt
            .get(key)
            .filter(|e| e.front.valid() == worlds && e.depth <= m)
            .cloned()
    }

    fn store(&mut self, key: S::Key, m: u32, front: &ParetoFront, best_move: Option<S::Move>) {
        if self.options.use_tt && !front.is_empty() {
            self.tt.insert(key, TtEntry { depth: m, front: front.clone(), best_move });
        }
    }

    fn ordered_moves(&mut self, node: &S::Node, worlds: u64, first: Option<S::Move>) -> Vec<(S::Move, u64)> {
        let mut moves = Vec::new();
        self.space.moves(node, worlds, &mut moves);
        if let Some(best) = first {
            if let Some(i) = moves.iter().position(|&(mv, _)| mv == best) {
                moves[..=i].rotate_right(1);
            }
        }
        moves
    }

    fn search(&mut self, node: &S::Node, m: u32, worlds: u64, alpha: &ParetoFront) -> ParetoFront {
        let key = self.options.use_tt.then(|| self.space.key(node));
        if let Some(v) = stop_counted(self.space, node, m, worlds, self.stats) {
            let front = ParetoFront::singleton(v);
            if let Some(key) = key {
                self.store(key, m, &front, None);
            }
            return front;
        }
        let entry = key.as_ref().and_then(|k| self.entry(k, m, worlds));
        if let Some(e) = &entry {
            if e.depth == m {
                self.stats.tt_hits += 1;
                if self.space.is_max(node) {
                    self.stats.max_nodes += 1;
                } else {
                    self.stats.min_nodes += 1;
                }
                return e.front.clone();
            }
        }
        let moves = self.ordered_moves(node, worlds, entry.as_ref().and_then(|e| e.best_move));
        if self.space.is_max(node) {
            self.stats.max_nodes += 1;
            let mut front = ParetoFront::empty();
            let mut best: Option<(S::Move, Score)> = None;
            let none = ParetoFront::empty();
            for (mv, w1) in moves {
                let child = self.space.play(node, mv);
                let child_alpha = if self.options.use_early_cut { &front } else { &none };
                let f = self.search(&child, m - 1, w1, child_alpha);
                if let Some(mu) = f.try_mu() {
                    if best.is_none_or(|(_, b)| mu > b) {
                        best = Some((mv, mu));
                    }
                }
                front.max_assign(&f);
            }
            if let Some(key) = key {
                self.store(key, m, &front, best.map(|b| b.0));
            }
            front
        } else {
            self.stats.min_nodes += 1;
            if self.options.use_early_cut && !alpha.is_empty() {
                if let Some(e) = &entry {
                    if e.front.leq(alpha) {
                        self.stats.early_cuts += 1;
                        return ParetoFront::empty();
                    }
                }
            }
            let mut mini = ParetoFront::empty();
            let mut best: Option<(S::Move, Score)> = None;
            let none = ParetoFront::empty();
            for (mv, w1) in moves {
                let child = self.space.play(node, mv);
                let f = self.search(&child, m, w1, &none).lift(worlds);
                let mu = f.mu();
                if best.is_none_or(|(_, b)| mu < b) {
                    best = Some((mv, mu));
                }
                mini = mini.min_fronts(&f);
                if self.options.use_early_cut && !alpha.is_empty() && mini.leq(alpha) {
                    self.stats.early_cuts += 1;
                    return ParetoFront::empty();
                }
            }
            if let Some(key) = key {
                self.store(key, m, &mini, best.map(|b| b.0));
            }
            mini
        }
    }
}

/// Result of one iteration at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSearch<M> {
    pub depth: u32,
    pub front: ParetoFront,
    /// Front of every root move searched, in search order. Moves skipped by
    /// a root cut are absent; moves cut early have an empty front.
    pub move_fronts: Vec<(M, ParetoFront)>,
    pub root_cut: bool,
}

impl<M: Copy> RootSearch<M> {
    /// Move with the highest μ; the first searched among equals.
    pub fn best(&self) -> Option<(M, Score)> {
        let mut best: Option<(M, Score)> = None;
        for (mv, f) in &self.move_fronts {
            if let Some(mu) = f.try_mu() {
                if best.is_none_or(|(_, b)| mu > b) {
                    best = Some((*mv, mu));
                }
            }
        }
        best
    }

    pub fn mu(&self) -> Option<Score> {
        self.front.try_mu()
    }
}

/// One iteration at a Max root over the given root moves, in the given
/// order. `previous_best` is the best μ of the previous iteration; with the
/// root cut on, the iteration stops once the running front reaches it.
#[allow(clippy::too_many_arguments)]
pub fn search_root<S: SearchSpace>(
    space: &mut S,
    node: &S::Node,
    m: u32,
    worlds: u64,
    root_moves: &[(S::Move, u64)],
    previous_best: Option<Score>,
    toggles: Toggles,
    tt: &mut SpaceTable<S>,
    stats: &mut SearchStats,
) -> RootSearch<S::Move> {
    assert!(m >= 1, "root search needs M >= 1");
    assert!(space.is_max(node), "root must be a Max node");
    debug_assert!(root_moves.iter().all(|&(_, w)| w == worlds), "Max moves are legal in every world");
    let options = NodeOptions { use_tt: toggles.tt, use_early_cut: toggles.early_cut };
    let mut engine = Engine { space, tt, options, stats };
    engine.stats.max_nodes += 1;
    let mut front = ParetoFront::empty();
    let mut move_fronts = Vec::with_capacity(root_moves.len());
    let mut root_cut = false;
    let none = ParetoFront::empty();
    for (i, &(mv, w1)) in root_moves.iter().enumerate() {
        let child = engine.space.play(node, mv);
        let alpha = if toggles.early_cut { front.clone() } else { none.clone() };
        let f = engine.search(&child, m - 1, w1, &alpha);
        front.max_assign(&f);
        move_fronts.push((mv, f));
        if toggles.root_cut && i + 1 < root_moves.len() {
            if let (Some(prev), Some(mu)) = (previous_best, front.try_mu()) {
                if mu == prev {
                    engine.stats.root_cuts += 1;
                    root_cut = true;
                    break;
                }
            }
        }
    }
    let result = RootSearch { depth: m, front, move_fronts, root_cut };
    if toggles.tt && !root_cut {
        let key = engine.space.key(node);
        let best = result.best().map(|b| b.0);
        engine.store(key, m, &result.front, best);
    }
    result
}

/// Every iteration of an iterative-deepening search.
#[derive(Clone, Debug)]
pub struct Deepening<M> {
    pub iterations: Vec<RootSearch<M>>,
    pub stats: SearchStats,
}

impl<M: Copy> Deepening<M> {
    pub fn last(&self) -> &RootSearch<M> {
        self.iterations.last().expect("at least one iteration")
    }

    pub fn best(&self) -> (M, Score) {
        self.last().best().expect("root front is never empty")
    }
}

/// Iterative deepening for `M = 1..=max_depth`, sharing the table across
/// iterations.
pub fn iterative_deepening<S: SearchSpace>(
    space: &mut S,
    node: &S::Node,
    worlds: u64,
    root_moves: &[(S::Move, u64)],
    max_depth: u32,
    toggles: Toggles,
    tt: &mut SpaceTable<S>,
) -> Deepening<S::Move> {
    assert!(!root_moves.is_empty(), "no root move");
    let mut stats = SearchStats::default();
    let mut iterations: Vec<RootSearch<S::Move>> = Vec::new();
    for m in 1..=max_depth {
        let previous = iterations.last().and_then(|r| r.best()).map(|b| b.1);
        let r = search_root(space, node, m, worlds, root_moves, previous, toggles, tt, &mut stats);
        iterations.push(r);
    }
    Deepening { iterations, stats }
}
