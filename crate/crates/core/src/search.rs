//! Bucket-guided detection of commutative arguments.
//!
//! For every bucket class holding at least two rows, rows are split into
//! maximal groups of identical potentials. The positions on which a group's
//! assignments disagree form a candidate set; candidates of one class are
//! intersected with the candidates surviving all earlier classes. A class
//! with no duplicate potentials, or an empty intersection, ends the search
//! with no result.
//!
//! Arguments with different ranges can never be exchanged, so the search
//! runs once per group of arguments sharing a range. Within a range group
//! the classes are keyed by the values of the arguments outside the group
//! together with the bucket over the group; for a factor whose arguments
//! all share one range these are exactly the buckets over all arguments.
//!
//! Every surviving candidate is checked with [`is_commutative`] before it is
//! reported. A candidate that fails is replaced by its largest commutative
//! subsets, so results are always sound.

use itertools::Itertools;
use serde::Serialize;

use crate::buckets::{BucketClass, ClassIndex};
use crate::candidates::{CandidateAntichain, CandidateSet};
use crate::commutative::is_commutative;
use crate::deadline::{Deadline, Timeout};
use crate::error::{Error, Result};
use crate::factor::{Assignment, Factor};

/// Counters describing one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DecorStats {
    /// Classes in all range groups searched.
    pub buckets_total: usize,
    /// Classes with at least two rows that were split into groups.
    pub buckets_visited: usize,
    /// Classes with fewer than two rows, or not reached after an early exit.
    pub buckets_skipped: usize,
    /// Groups of at least two identical potentials.
    pub groups_formed: usize,
    /// Pairwise set intersections between surviving and new candidates.
    pub intersections_computed: usize,
    /// Largest number of surviving candidates held at once.
    pub candidate_peak: usize,
    /// Candidates that did not pass the final commutativity check.
    pub verification_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecorOutcome {
    pub candidates: CandidateAntichain,
    pub stats: DecorStats,
}

/// Positions grouped by identical range, in order of first occurrence.
pub fn range_groups(factor: &Factor) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for p in factor.positions() {
        match groups.iter_mut().find(|g| factor.same_range(g[0], p)) {
            Some(g) => g.push(p),
            None => groups.push(vec![p]),
        }
    }
    groups
}

/// Runs the detection without a deadline.
pub fn decor(factor: &Factor) -> DecorOutcome {
    decor_with_deadline(factor, Deadline::none()).expect("no deadline set")
}

/// Runs the detection, polling `deadline` once per bucket class.
pub fn decor_with_deadline(factor: &Factor, deadline: Deadline) -> Result<DecorOutcome, Timeout> {
    let mut stats = DecorStats::default();
    let mut candidates = CandidateAntichain::new();
    for group in range_groups(factor).into_iter().filter(|g| g.len() >= 2) {
        let found = search_range_group(factor, &group, deadline, &mut stats)?;
        for set in verify(factor, found, deadline, &mut stats)?.iter() {
            candidates.insert(set);
        }
    }
    Ok(DecorOutcome { candidates, stats })
}

fn search_range_group(
    factor: &Factor,
    group: &[usize],
    deadline: Deadline,
    stats: &mut DecorStats,
) -> Result<CandidateAntichain, Timeout> {
    let index = ClassIndex::build(factor, group, true).expect("range group shares one range");
    let (offsets, rows) = index.grouped_rows();
    let class_count = index.class_count();
    let group_mask = CandidateSet::from_positions(group.iter().copied());
    stats.buckets_total += class_count;

    let mut current: CandidateAntichain = std::iter::once(group_mask).collect();
    stats.candidate_peak = stats.candidate_peak.max(current.len());
    for class in 0..class_count {
        deadline.check()?;
        let class_rows = &rows[offsets[class]..offsets[class + 1]];
        if class_rows.len() < 2 {
            stats.buckets_skipped += 1;
            continue;
        }
        stats.buckets_visited += 1;
        let groups = identical_groups(class_rows, factor.potential_ids());
        if groups.is_empty() {
            stats.buckets_skipped += class_count - class - 1;
            return Ok(CandidateAntichain::new());
        }
        let mut per_class = CandidateAntichain::new();
        for g in &groups {
            stats.groups_formed += 1;
            if let Some(c) = disagreeing_positions(factor, g, group_mask) {
                per_class.insert(c);
            }
        }
        let mut next = CandidateAntichain::new();
        for a in current.iter() {
            for b in per_class.iter() {
                stats.intersections_computed += 1;
                let common = a.intersection(b);
                if common.len() >= 2 {
                    next.insert(common);
                }
            }
        }
        current = next;
        stats.candidate_peak = stats.candidate_peak.max(current.len());
        if current.is_empty() {
            stats.buckets_skipped += class_count - class - 1;
            return Ok(current);
        }
    }
    Ok(current)
}

/// Keeps verified candidates; a failing candidate is replaced by all its
/// commutative subsets of the largest size that has any.
fn verify(
    factor: &Factor,
    found: CandidateAntichain,
    deadline: Deadline,
    stats: &mut DecorStats,
) -> Result<CandidateAntichain, Timeout> {
    let mut out = CandidateAntichain::new();
    for set in found.sorted() {
        if commutative(factor, set) {
            out.insert(set);
            continue;
        }
        stats.verification_failures += 1;
        let positions = set.positions();
        for size in (2..positions.len()).rev() {
            let mut any = false;
            for subset in positions.iter().copied().combinations(size) {
                deadline.check()?;
                if is_commutative(factor, &subset).expect("positions are valid") {
                    out.insert(CandidateSet::from_positions(subset));
                    any = true;
                }
            }
            if any {
                break;
            }
        }
    }
    Ok(out)
}

fn commutative(factor: &Factor, set: CandidateSet) -> bool {
    is_commutative(factor, &set.positions()).expect("candidate positions are valid")
}

/// Maximal groups (size >= 2) of rows with identical potentials, ordered by
/// their first row.
fn identical_groups(rows: &[usize], ids: &[u32]) -> Vec<Vec<usize>> {
    let mut keyed: Vec<(u32, usize)> = rows.iter().map(|&r| (ids[r], r)).collect();
    keyed.sort_unstable();
    let mut groups: Vec<Vec<usize>> = keyed
        .chunk_by(|a, b| a.0 == b.0)
        .filter(|run| run.len() >= 2)
        .map(|run| run.iter().map(|&(_, r)| r).collect())
        .collect();
    groups.sort_unstable_by_key(|g| g[0]);
    groups
}

/// Positions within `allowed` where the rows' assignments do not all agree;
/// `None` when fewer than two such positions exist.
fn disagreeing_positions(factor: &Factor, rows: &[usize], allowed: CandidateSet) -> Option<CandidateSet> {
    let first = rows[0];
    let mut agreeing = allowed.positions();
    let mut disagree = 0u64;
    for &row in &rows[1..] {
        agreeing.retain(|&p| {
            let same = factor.value_at(row, p) == factor.value_at(first, p);
            if !same {
                disagree |= 1 << p;
            }
            same
        });
        if agreeing.is_empty() {
            break;
        }
    }
    let set = CandidateSet::from_mask(disagree);
    (set.len() >= 2).then_some(set)
}

/// Splits a bucket class into maximal groups of at least two entries with
/// identical potentials. Each group lists table rows; singletons are dropped.
pub fn partition_identical_groups(factor: &Factor, class: &BucketClass) -> Vec<Vec<usize>> {
    identical_groups(&class.rows, factor.potential_ids())
}

/// Per-position common value of `assignments`, or `None` where they differ.
pub fn elementwise_intersection(assignments: &[Assignment]) -> Result<Vec<Option<usize>>> {
    let (first, rest) = assignments
        .split_first()
        .ok_or_else(|| Error::InvalidAssignment("no assignments to intersect".into()))?;
    let mut out: Vec<Option<usize>> = first.values().iter().copied().map(Some).collect();
    for a in rest {
        if a.values().len() != out.len() {
            return Err(Error::LengthMismatch {
                expected: out.len(),
                actual: a.values().len(),
            });
        }
        for (slot, &v) in out.iter_mut().zip(a.values()) {
            if *slot != Some(v) {
                *slot = None;
            }
        }
    }
    Ok(out)
}

/// Candidate set of a group of identical potentials: the positions where
/// the group's assignments disagree, if there are at least two.
pub fn candidate_from_group(assignments: &[Assignment]) -> Option<CandidateSet> {
    let common = elementwise_intersection(assignments).ok()?;
    let set = CandidateSet::from_positions(common.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(p, _)| p));
    (set.len() >= 2).then_some(set)
}

/// Upper bound on the size of any commutative subset of `range_group`: the
/// minimum, over classes with at least two rows, of the largest number of
/// identical potentials in the class. Returns the group size when no class
/// has two rows.
pub fn upper_bound(factor: &Factor, range_group: &[usize]) -> Result<usize> {
    if range_group.is_empty() {
        return Err(Error::SubsetTooSmall(0));
    }
    let index = ClassIndex::build(factor, range_group, true)?;
    let (offsets, rows) = index.grouped_rows();
    let ids = factor.potential_ids();
    let mut bound = index.subset.len();
    let mut seen_class = false;
    let mut keyed: Vec<u32> = Vec::new();
    for class in 0..index.class_count() {
        let class_rows = &rows[offsets[class]..offsets[class + 1]];
        if class_rows.len() < 2 {
            continue;
        }
        keyed.clear();
        keyed.extend(class_rows.iter().map(|&r| ids[r]));
        keyed.sort_unstable();
        let most = keyed.chunk_by(|a, b| a == b).map(<[u32]>::len).max().unwrap_or(0);
        bound = if seen_class { bound.min(most) } else { most };
        seen_class = true;
    }
    Ok(bound)
}
