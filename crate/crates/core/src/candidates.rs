//! Sets of argument positions and antichains of them.

use std::cmp::Ordering;
use std::fmt;

/// A set of argument positions, stored as a bit mask (arity is far below 64
/// for any table that fits in memory).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CandidateSet(u64);

impl CandidateSet {
    pub const MAX_POSITIONS: usize = 64;

    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        CandidateSet(positions.into_iter().fold(0u64, |mask, p| {
            assert!(p < Self::MAX_POSITIONS, "argument position {p} out of bounds");
            mask | 1 << p
        }))
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        CandidateSet(mask)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, position: usize) -> bool {
        position < Self::MAX_POSITIONS && self.0 >> position & 1 == 1
    }

    /// Ascending positions.
    pub fn positions(self) -> Vec<usize> {
        (0..Self::MAX_POSITIONS).filter(|&p| self.contains(p)).collect()
    }

    pub fn is_subset(self, other: CandidateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: CandidateSet) -> CandidateSet {
        CandidateSet(self.0 & other.0)
    }
}

/// Lexicographic order on the ascending position lists.
impl Ord for CandidateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.positions().cmp(&other.positions())
    }
}

impl PartialOrd for CandidateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.positions()).finish()
    }
}

/// A family of candidate sets in which no member contains another.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct CandidateAntichain {
    sets: Vec<CandidateSet>,
}

impl CandidateAntichain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `set` unless an existing member contains it; members strictly
    /// contained in `set` are dropped. Returns whether `set` was added.
    pub fn insert(&mut self, set: CandidateSet) -> bool {
        if self.sets.iter().any(|s| set.is_subset(*s)) {
            return false;
        }
        self.sets.retain(|s| !s.is_subset(set));
        self.sets.push(set);
        true
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = CandidateSet> + '_ {
        self.sets.iter().copied()
    }

    /// Members in canonical order: larger first, then lexicographic.
    pub fn sorted(&self) -> Vec<CandidateSet> {
        let mut out = self.sets.clone();
        out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        out
    }
}

impl FromIterator<CandidateSet> for CandidateAntichain {
    fn from_iter<T: IntoIterator<Item = CandidateSet>>(iter: T) -> Self {
        let mut out = CandidateAntichain::new();
        for set in iter {
            out.insert(set);
        }
        out
    }
}

impl fmt::Debug for CandidateAntichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sorted()).finish()
    }
}

/// All pairwise intersections with at least two members, reduced to an antichain.
pub fn intersect_antichains(left: &CandidateAntichain, right: &CandidateAntichain) -> CandidateAntichain {
    let mut out = CandidateAntichain::new();
    for a in left.iter() {
        for b in right.iter() {
            let common = a.intersection(b);
            if common.len() >= 2 {
                out.insert(common);
            }
        }
    }
    out
}

/// A largest member; ties go to the lexicographically smallest position list.
pub fn max_candidate(antichain: &CandidateAntichain) -> Option<CandidateSet> {
    antichain.sorted().into_iter().next()
}
