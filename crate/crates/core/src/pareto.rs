//! Outcome vectors over possible worlds and Pareto fronts of them.
//!
//! World `i` is bit `i` of a `u64`, so at most [`MAX_WORLDS`] worlds can be
//! tracked. Every vector carries the mask of worlds that are possible where
//! it was produced; comparing vectors with different masks is a bug in the
//! caller and panics.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

pub const MAX_WORLDS: usize = 64;

/// Mask with the first `n` worlds set.
#[inline]
pub fn first_worlds(n: usize) -> u64 {
    assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds");
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Exact win ratio `wins / worlds`. Compared by cross-multiplication, so
/// `1/3 == 2/6`.
#[derive(Clone, Copy, Debug)]
pub struct Score {
    pub wins: u32,
    pub worlds: u32,
}

impl Score {
    pub fn new(wins: u32, worlds: u32) -> Score {
        assert!(worlds > 0, "score over zero worlds");
        assert!(wins <= worlds);
        Score { wins, worlds }
    }

    pub fn as_f64(self) -> f64 {
        self.wins as f64 / self.worlds as f64
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Score) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Score) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Score) -> Ordering {
        (self.wins as u64 * other.worlds as u64).cmp(&(other.wins as u64 * self.worlds as u64))
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.wins, self.worlds)
    }
}

/// Win (1) / loss (0) per world, restricted to the `valid` worlds.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomeVector {
    values: u64,
    valid: u64,
}

impl OutcomeVector {
    pub fn new(values: u64, valid: u64) -> OutcomeVector {
        assert!(values & !valid == 0, "won world outside the valid mask");
        OutcomeVector { values, valid }
    }

    pub fn all_won(valid: u64) -> OutcomeVector {
        OutcomeVector { values: valid, valid }
    }

    pub fn all_lost(valid: u64) -> OutcomeVector {
        OutcomeVector { values: 0, valid }
    }

    /// Vector over worlds `0..bits.len()`, all valid.
    pub fn from_bits(bits: &[bool]) -> OutcomeVector {
        let valid = first_worlds(bits.len());
        let values = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        OutcomeVector { values, valid }
    }

    #[inline]
    pub fn values(self) -> u64 {
        self.values
    }

    #[inline]
    pub fn valid(self) -> u64 {
        self.valid
    }

    #[inline]
    pub fn won(self, world: usize) -> bool {
        self.values & (1 << world) != 0
    }

    /// `self[i] >= other[i]` for every valid world.
    #[inline]
    pub fn dominates(self, other: OutcomeVector) -> bool {
        assert_eq!(self.valid, other.valid, "vectors over different worlds");
        other.values & !self.values == 0
    }

    /// Average over the valid worlds.
    pub fn score(self) -> Score {
        assert!(self.valid != 0, "score of a vector with no valid world");
        Score::new(self.values.count_ones(), self.valid.count_ones())
    }

    #[inline]
    pub fn min(self, other: OutcomeVector) -> OutcomeVector {
        assert_eq!(self.valid, other.valid, "vectors over different worlds");
        OutcomeVector { values: self.values & other.values, valid: self.valid }
    }

    #[inline]
    pub fn max(self, other: OutcomeVector) -> OutcomeVector {
        assert_eq!(self.valid, other.valid, "vectors over different worlds");
        OutcomeVector { values: self.values | other.values, valid: self.valid }
    }

    /// Re-expresses the vector over a larger world set, counting the added
    /// worlds as won. At a Min node this is the neutral element: a world
    /// where a defender move is impossible never lowers the minimum.
    pub fn lift(self, valid: u64) -> OutcomeVector {
        assert!(self.valid & !valid == 0, "lift must widen the mask");
        OutcomeVector { values: self.values | (valid & !self.valid), valid }
    }

    /// Parses `[1 0 0]`: worlds `0..n`, all valid.
    pub fn parse(text: &str) -> Option<OutcomeVector> {
        let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
        let bits: Vec<bool> = inner
            .split_whitespace()
            .map(|t| match t {
                "0" => Some(false),
                "1" => Some(true),
                _ => None,
            })
            .collect::<Option<_>>()?;
        (!bits.is_empty() && bits.len() <= MAX_WORLDS).then(|| OutcomeVector::from_bits(&bits))
    }
}

impl fmt::Display for OutcomeVector {
    /// Only valid worlds are printed, in index order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for i in 0..MAX_WORLDS {
            if self.valid & (1 << i) == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(if self.won(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for OutcomeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An antichain of outcome vectors sharing one valid mask. The empty front
/// is the identity of both [`max_fronts`](ParetoFront::max_fronts) and
/// [`min_fronts`](ParetoFront::min_fronts).
#[derive(Clone, Default)]
pub struct ParetoFront {
    valid: u64,
    members: Vec<u64>,
}

impl ParetoFront {
    pub fn empty() -> ParetoFront {
        ParetoFront::default()
    }

    pub fn singleton(v: OutcomeVector) -> ParetoFront {
        ParetoFront { valid: v.valid, members: alloc::vec![v.values] }
    }

    pub fn from_vectors<I: IntoIterator<Item = OutcomeVector>>(vectors: I) -> ParetoFront {
        let mut front = ParetoFront::empty();
        for v in vectors {
            front.insert(v);
        }
        front
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Mask of the front's worlds; meaningless for the empty front.
    #[inline]
    pub fn valid(&self) -> u64 {
        self.valid
    }

    pub fn iter(&self) -> impl Iterator<Item = OutcomeVector> + '_ {
        let valid = self.valid;
        self.members.iter().map(move |&values| OutcomeVector { values, valid })
    }

    fn check_mask(&self, valid: u64) {
        assert!(
            self.members.is_empty() || self.valid == valid,
            "fronts over different worlds"
        );
    }

    /// Adds `v` unless a member dominates it, dropping members `v`
    /// dominates. Returns whether `v` was added.
    pub fn insert(&mut self, v: OutcomeVector) -> bool {
        self.check_mask(v.valid);
        self.valid = v.valid;
        if self.members.iter().any(|&m| v.values & !m == 0) {
            return false;
        }
        self.members.retain(|&m| m & !v.values != 0);
        self.members.push(v.values);
        true
    }

    /// Union with domination pruning (Max node backup).
    pub fn max_fronts(&self, other: &ParetoFront) -> ParetoFront {
        let mut out = self.clone();
        out.max_assign(other);
        out
    }

    pub fn max_assign(&mut self, other: &ParetoFront) {
        for v in other.iter() {
            self.insert(v);
        }
    }

    /// Every pairwise index-wise minimum, pruned (Min node backup).
    pub fn min_fronts(&self, other: &ParetoFront) -> ParetoFront {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        other.check_mask(self.valid);
        let mut out = ParetoFront::empty();
        for &a in &self.members {
            for &b in &other.members {
                out.insert(OutcomeVector { values: a & b, valid: self.valid });
            }
        }
        out
    }

    /// `self <= other`: every member of `self` is dominated by some member
    /// of `other`. Vacuously true for the empty front.
    pub fn leq(&self, other: &ParetoFront) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        other.check_mask(self.valid);
        self.members
            .iter()
            .all(|&v| other.members.iter().any(|&p| v & !p == 0))
    }

    /// [`OutcomeVector::lift`] applied to every member.
    pub fn lift(&self, valid: u64) -> ParetoFront {
        if self.is_empty() || self.valid == valid {
            return self.clone();
        }
        let extra = valid & !self.valid;
        assert!(self.valid & !valid == 0, "lift must widen the mask");
        ParetoFront { valid, members: self.members.iter().map(|&m| m | extra).collect() }
    }

    /// Best score among the members.
    pub fn mu(&self) -> Score {
        self.try_mu().expect("mu of an empty front")
    }

    pub fn try_mu(&self) -> Option<Score> {
        self.iter().map(OutcomeVector::score).max()
    }

    /// Member vector achieving [`mu`](Self::mu); the first such in
    /// insertion order.
    pub fn best(&self) -> Option<OutcomeVector> {
        let mut best: Option<OutcomeVector> = None;
        for v in self.iter() {
            if best.is_none_or(|b| v.score() > b.score()) {
                best = Some(v);
            }
        }
        best
    }

    /// Members sorted by value bits, for stable output.
    pub fn sorted(&self) -> Vec<OutcomeVector> {
        let mut v: Vec<OutcomeVector> = self.iter().collect();
        v.sort_by_key(|o| core::cmp::Reverse(o.values.reverse_bits()));
        v
    }

    /// Parses `{[1 0 0],[0 1 1]}` (or `{}`).
    pub fn parse(text: &str) -> Option<ParetoFront> {
        let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
        let mut front = ParetoFront::empty();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let end = rest.find(']')?;
            let v = OutcomeVector::parse(&rest[..=end])?;
            if !front.is_empty() && front.valid != v.valid {
                return None;
            }
            front.insert(v);
            rest = rest[end + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        Some(front)
    }

    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

/// Set equality: fronts built in different orders compare equal.
impl PartialEq for ParetoFront {
    fn eq(&self, other: &ParetoFront) -> bool {
        if self.members.len() != other.members.len() {
            return false;
        }
        if self.members.is_empty() {
            return true;
        }
        self.valid == other.valid && self.members.iter().all(|m| other.members.contains(m))
    }
}

impl Eq for ParetoFront {}

impl fmt::Display for ParetoFront {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ParetoFront {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
