//! Buckets: histograms of range values over a subset of argument positions.
//!
//! A bucket `[n_1, ..., n_r]` counts how often each value of the shared range
//! occurs among the subset's arguments. Every table row falls into exactly one
//! bucket for a given subset.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::factor::{Assignment, Factor};
use crate::potential::Potential;

/// Occurrence counts per range value, in range order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bucket(pub Vec<u32>);

impl Bucket {
    /// Histogram of `values` restricted to `subset`. Values must be `< range_size`.
    pub fn of_values(values: &[usize], subset: &[usize], range_size: usize) -> Bucket {
        let mut counts = vec![0u32; range_size];
        for &p in subset {
            counts[values[p]] += 1;
        }
        Bucket(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Number of arguments the bucket counts over.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Debug for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Returns the range size shared by all positions in `subset`, or
/// `MixedRanges`. An empty subset shares any range; `None` is returned then.
pub fn shared_range(factor: &Factor, subset: &[usize]) -> Result<Option<usize>> {
    factor.check_positions(subset)?;
    match subset.split_first() {
        None => Ok(None),
        Some((&first, rest)) => {
            if rest.iter().all(|&p| factor.same_range(first, p)) {
                Ok(Some(factor.dims()[first]))
            } else {
                Err(Error::MixedRanges)
            }
        }
    }
}

/// Bucket of `assignment` over `subset` of `factor`'s arguments.
pub fn bucket_of(factor: &Factor, assignment: &Assignment, subset: &[usize]) -> Result<Bucket> {
    factor.row_index(assignment)?;
    let range_size = shared_range(factor, subset)?.unwrap_or(factor.dims()[0]);
    Ok(Bucket::of_values(assignment.values(), subset, range_size))
}

/// All weak compositions of `subset_size` into `range_size` parts, in
/// lexicographically descending order (`[n, 0, ...]` first).
pub fn enumerate_buckets(subset_size: usize, range_size: usize) -> Vec<Bucket> {
    assert!(range_size >= 1, "range size must be positive");
    let mut out = Vec::new();
    let mut counts = vec![0u32; range_size];
    fill(&mut counts, 0, subset_size as u32, &mut out);
    out
}

fn fill(counts: &mut [u32], index: usize, remaining: u32, out: &mut Vec<Bucket>) {
    if index + 1 == counts.len() {
        counts[index] = remaining;
        out.push(Bucket(counts.to_vec()));
        return;
    }
    for c in (0..=remaining).rev() {
        counts[index] = c;
        fill(counts, index + 1, remaining - c, out);
    }
}

/// Rows of a factor that share one bucket (and, for complement-keyed
/// partitions, one assignment of the arguments outside the subset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketClass {
    pub bucket: Bucket,
    /// Values of the non-subset arguments, in argument order, when keyed by them.
    pub complement: Option<Vec<usize>>,
    /// Table rows in the class, ascending.
    pub rows: Vec<usize>,
}

impl BucketClass {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The class's `(assignment, potential)` entries in table order.
    pub fn entries<'a>(&'a self, factor: &'a Factor) -> impl Iterator<Item = (Assignment, &'a Potential)> + 'a {
        self.rows
            .iter()
            .map(move |&r| (factor.assignment(r), &factor.table()[r]))
    }

    /// The multiset of potentials of the class, in table order.
    pub fn potentials<'a>(&'a self, factor: &'a Factor) -> Vec<&'a Potential> {
        self.rows.iter().map(|&r| &factor.table()[r]).collect()
    }
}

/// Partition of all table rows by their bucket over `subset`.
///
/// Classes are listed in canonical bucket order; buckets no row falls into
/// are omitted.
pub fn bucket_partition(factor: &Factor, subset: &[usize]) -> Result<Vec<BucketClass>> {
    let index = ClassIndex::build(factor, subset, false)?;
    Ok(index.into_classes(false))
}

/// Partition of all table rows by (assignment of the arguments outside
/// `subset`, bucket over `subset`). Ordered bucket-major, complement
/// assignments row-major within a bucket.
pub fn complement_partition(factor: &Factor, subset: &[usize]) -> Result<Vec<BucketClass>> {
    let index = ClassIndex::build(factor, subset, true)?;
    Ok(index.into_classes(true))
}

/// Dense class labelling of table rows for one subset.
///
/// Class `c` is bucket `c / complements` with complement index
/// `c % complements`.
#[derive(Debug, Clone)]
pub(crate) struct ClassIndex<'f> {
    pub factor: &'f Factor,
    pub subset: Vec<usize>,
    pub complement_positions: Vec<usize>,
    pub buckets: Vec<Bucket>,
    pub complements: usize,
    pub class_of_row: Vec<u32>,
}

impl<'f> ClassIndex<'f> {
    pub fn build(factor: &'f Factor, subset: &[usize], keyed_by_complement: bool) -> Result<Self> {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let range_size = shared_range(factor, &subset)?.unwrap_or(1);
        let buckets = enumerate_buckets(subset.len(), range_size);
        let rank: HashMap<Vec<u32>, u32> = buckets
            .iter()
            .enumerate()
            .map(|(i, b)| (b.0.clone(), i as u32))
            .collect();

        let complement_positions: Vec<usize> = if keyed_by_complement {
            factor
                .positions()
                .filter(|p| subset.binary_search(p).is_err())
                .collect()
        } else {
            Vec::new()
        };
        let mut complement_strides = vec![1usize; complement_positions.len()];
        for i in (0..complement_positions.len().saturating_sub(1)).rev() {
            complement_strides[i] = complement_strides[i + 1] * factor.dims()[complement_positions[i + 1]];
        }
        let complements: usize = complement_positions.iter().map(|&p| factor.dims()[p]).product();

        let mut counts = vec![0u32; range_size];
        let class_of_row = (0..factor.len())
            .map(|row| {
                counts.iter_mut().for_each(|c| *c = 0);
                for &p in &subset {
                    counts[factor.value_at(row, p)] += 1;
                }
                let bucket = rank[counts.as_slice()] as usize;
                let complement: usize = complement_positions
                    .iter()
                    .zip(&complement_strides)
                    .map(|(&p, &s)| factor.value_at(row, p) * s)
                    .sum();
                (bucket * complements + complement) as u32
            })
            .collect();

        Ok(ClassIndex {
            factor,
            subset,
            complement_positions,
            buckets,
            complements,
            class_of_row,
        })
    }

    pub fn class_count(&self) -> usize {
        self.buckets.len() * self.complements
    }

    /// Rows grouped by class: `(offsets, rows)` where class `c` owns
    /// `rows[offsets[c]..offsets[c + 1]]`, rows ascending.
    pub fn grouped_rows(&self) -> (Vec<usize>, Vec<usize>) {
        let classes = self.class_count();
        let mut offsets = vec![0usize; classes + 1];
        for &c in &self.class_of_row {
            offsets[c as usize + 1] += 1;
        }
        for i in 0..classes {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut rows = vec![0usize; self.class_of_row.len()];
        for (row, &c) in self.class_of_row.iter().enumerate() {
            rows[cursor[c as usize]] = row;
            cursor[c as usize] += 1;
        }
        (offsets, rows)
    }

    fn into_classes(self, with_complement: bool) -> Vec<BucketClass> {
        let (offsets, rows) = self.grouped_rows();
        (0..self.class_count())
            .filter(|&c| offsets[c + 1] > offsets[c])
            .map(|c| {
                let class_rows = rows[offsets[c]..offsets[c + 1]].to_vec();
                let complement = with_complement.then(|| {
                    let first = class_rows[0];
                    self.complement_positions
                        .iter()
                        .map(|&p| self.factor.value_at(first, p))
                        .collect()
                });
                BucketClass {
                    bucket: self.buckets[c / self.complements].clone(),
                    complement,
                    rows: class_rows,
                }
            })
            .collect()
    }
}
