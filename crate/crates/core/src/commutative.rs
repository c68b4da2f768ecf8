//! Direct commutativity checks.
//!
//! A factor is commutative with respect to a subset `S` of its arguments when
//! permuting the values of the `S` arguments never changes the potential. The
//! check used here is equivalent: every row sharing the same values outside
//! `S` and the same bucket over `S` must carry one identical potential.

use crate::buckets::{shared_range, ClassIndex};
use crate::error::{Error, Result};
use crate::factor::Factor;

/// Whether `factor` is commutative with respect to the argument positions in
/// `subset`. Subsets of size zero or one are trivially commutative; subsets
/// whose members have different ranges never are.
pub fn is_commutative(factor: &Factor, subset: &[usize]) -> Result<bool> {
    scan(factor, subset, true)
}

/// Same result as [`is_commutative`], but always visits every table row.
///
/// This is the per-subset check of the subset-enumeration baseline.
pub fn is_commutative_full_scan(factor: &Factor, subset: &[usize]) -> Result<bool> {
    scan(factor, subset, false)
}

fn scan(factor: &Factor, subset: &[usize], stop_early: bool) -> Result<bool> {
    factor.check_positions(subset)?;
    match shared_range(factor, subset) {
        Err(Error::MixedRanges) => return Ok(false),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let mut distinct = subset.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Ok(true);
    }
    let index = ClassIndex::build(factor, &distinct, true)?;
    let mut first = vec![u32::MAX; index.class_count()];
    let mut consistent = true;
    for (&class, &id) in index.class_of_row.iter().zip(factor.potential_ids()) {
        let slot = &mut first[class as usize];
        if *slot == u32::MAX {
            *slot = id;
        } else if *slot != id {
            consistent = false;
            if stop_early {
                break;
            }
        }
    }
    Ok(consistent)
}
