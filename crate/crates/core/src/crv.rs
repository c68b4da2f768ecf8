//! Counting representations: commutative arguments replaced by one bucket.

use std::collections::HashMap;

use crate::buckets::{complement_partition, enumerate_buckets, Bucket};
use crate::commutative::is_commutative;
use crate::error::{Error, Result};
use crate::factor::{Factor, RandomVariable};
use crate::potential::Potential;

/// One row of a compressed table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedRow {
    /// Value indices of the fixed arguments, in argument order.
    pub fixed: Vec<usize>,
    pub bucket: Bucket,
    pub potential: Potential,
}

/// A factor whose commutative arguments are counted rather than listed.
///
/// Rows are ordered by fixed assignment (row-major), then by bucket in
/// canonical descending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedFactor {
    name: String,
    /// Arguments of the source factor, in their original order.
    args: Vec<RandomVariable>,
    fixed_positions: Vec<usize>,
    counted_positions: Vec<usize>,
    rows: Vec<CompressedRow>,
}

impl CompressedFactor {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fixed_args(&self) -> Vec<&RandomVariable> {
        self.fixed_positions.iter().map(|&p| &self.args[p]).collect()
    }

    pub fn counted_args(&self) -> Vec<&RandomVariable> {
        self.counted_positions.iter().map(|&p| &self.args[p]).collect()
    }

    pub fn fixed_positions(&self) -> &[usize] {
        &self.fixed_positions
    }

    pub fn counted_positions(&self) -> &[usize] {
        &self.counted_positions
    }

    /// The range shared by all counted arguments.
    pub fn shared_range(&self) -> &[String] {
        self.args[self.counted_positions[0]].range()
    }

    pub fn rows(&self) -> &[CompressedRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Compresses the arguments at `subset` into a counting representation.
pub fn compress_to_crv(factor: &Factor, subset: &[usize]) -> Result<CompressedFactor> {
    factor.check_positions(subset)?;
    let mut counted = subset.to_vec();
    counted.sort_unstable();
    counted.dedup();
    if counted.len() < 2 {
        return Err(Error::SubsetTooSmall(counted.len()));
    }
    if !is_commutative(factor, &counted)? {
        return Err(Error::NotCommutative);
    }
    let classes = complement_partition(factor, &counted)?;
    let fixed_positions: Vec<usize> = factor.positions().filter(|p| !counted.contains(p)).collect();
    let mut rows: Vec<CompressedRow> = classes
        .into_iter()
        .map(|class| CompressedRow {
            fixed: class.complement.expect("complement-keyed partition"),
            bucket: class.bucket,
            potential: factor.table()[class.rows[0]].clone(),
        })
        .collect();
    // Partition order is bucket-major; present fixed-assignment-major.
    let bucket_rank: HashMap<Bucket, usize> = enumerate_buckets(counted.len(), factor.dims()[counted[0]])
        .into_iter()
        .enumerate()
        .map(|(i, b)| (b, i))
        .collect();
    let dims: Vec<usize> = fixed_positions.iter().map(|&p| factor.dims()[p]).collect();
    let fixed_index = |fixed: &[usize]| fixed.iter().zip(&dims).fold(0usize, |acc, (&v, &d)| acc * d + v);
    rows.sort_by_key(|r| (fixed_index(&r.fixed), bucket_rank[&r.bucket]));
    Ok(CompressedFactor {
        name: factor.name().to_string(),
        args: factor.args().to_vec(),
        fixed_positions,
        counted_positions: counted,
        rows,
    })
}

/// Expands a counting representation back into a dense factor.
pub fn expand_crv(compressed: &CompressedFactor) -> Result<Factor> {
    let lookup: HashMap<(&[usize], &Bucket), &Potential> = compressed
        .rows
        .iter()
        .map(|r| ((r.fixed.as_slice(), &r.bucket), &r.potential))
        .collect();
    if lookup.len() != compressed.rows.len() {
        return Err(Error::InvalidAssignment("duplicate compressed row".into()));
    }
    let range_size = compressed.shared_range().len();
    let dims: Vec<usize> = compressed.args.iter().map(RandomVariable::range_size).collect();
    let total: usize = dims.iter().product();
    let mut values = vec![0usize; dims.len()];
    let mut fixed = vec![0usize; compressed.fixed_positions.len()];
    let mut table = Vec::with_capacity(total);
    for row in 0..total {
        let mut rest = row;
        for (slot, &d) in values.iter_mut().zip(&dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        for (slot, &p) in fixed.iter_mut().zip(&compressed.fixed_positions) {
            *slot = values[p];
        }
        let bucket = Bucket::of_values(&values, &compressed.counted_positions, range_size);
        let potential = lookup.get(&(fixed.as_slice(), &bucket)).ok_or_else(|| {
            Error::InvalidAssignment(format!(
                "no compressed row for fixed values {fixed:?} and bucket {bucket}"
            ))
        })?;
        table.push((*potential).clone());
    }
    Factor::new(compressed.name.clone(), compressed.args.clone(), table)
}
