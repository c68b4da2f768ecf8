//! Subset-enumeration baseline: test every argument subset, largest first.

use crate::buckets::shared_range;
use crate::candidates::CandidateSet;
use crate::commutative::is_commutative_full_scan;
use crate::deadline::{Deadline, Timeout};
use crate::factor::Factor;

/// All subsets of `0..n`, by non-increasing size, lexicographic within a size,
/// ending with the empty set.
pub fn subsets_descending(n: usize) -> SubsetsDescending {
    SubsetsDescending {
        n,
        current: Some((0..n).collect()),
    }
}

#[derive(Debug, Clone)]
pub struct SubsetsDescending {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for SubsetsDescending {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        self.current = next_combination(&out, self.n).or_else(|| {
            // First combination of the next smaller size.
            (!out.is_empty()).then(|| (0..out.len() - 1).collect())
        });
        Some(out)
    }
}

fn next_combination(current: &[usize], n: usize) -> Option<Vec<usize>> {
    let k = current.len();
    let i = (0..k).rev().find(|&i| current[i] < n - k + i)?;
    let mut next = current.to_vec();
    next[i] += 1;
    for j in i + 1..k {
        next[j] = next[j - 1] + 1;
    }
    Some(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaiveOutcome {
    /// First (hence largest) commutative subset with at least two members.
    pub best: Option<CandidateSet>,
    /// Subsets whose table was scanned.
    pub subsets_tested: u64,
}

/// Largest commutative argument subset by exhaustive descending search.
///
/// Subsets mixing ranges are rejected without scanning the table. The
/// deadline is polled between subsets.
pub fn naive_max_commutative(factor: &Factor, deadline: Deadline) -> Result<NaiveOutcome, Timeout> {
    let mut tested = 0u64;
    for subset in subsets_descending(factor.arity()).take_while(|s| s.len() >= 2) {
        deadline.check()?;
        if shared_range(factor, &subset).is_err() {
            continue;
        }
        tested += 1;
        if is_commutative_full_scan(factor, &subset).expect("positions are in range") {
            return Ok(NaiveOutcome {
                best: Some(CandidateSet::from_positions(subset)),
                subsets_tested: tested,
            });
        }
    }
    Ok(NaiveOutcome {
        best: None,
        subsets_tested: tested,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutative::is_commutative;
    use crate::factor::fixtures::*;
    use crate::factor::RandomVariable;
    use itertools::Itertools;

    #[test]
    fn enumeration_order() {
        let got: Vec<Vec<usize>> = subsets_descending(2).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0], vec![1], vec![]]);
        let got: Vec<Vec<usize>> = subsets_descending(3).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 1, 2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0],
                vec![1],
                vec![2],
                vec![]
            ]
        );
        assert_eq!(subsets_descending(4).count(), 16);
        for n in 1..=10 {
            let all: Vec<Vec<usize>> = subsets_descending(n).collect();
            assert_eq!(all.len(), 1 << n);
            assert!(all.windows(2).all(|w| w[0].len() >= w[1].len()));
            assert_eq!(all.iter().unique().count(), 1 << n);
        }
    }

    #[test]
    fn worked_examples() {
        let s = |p: &[usize]| Some(CandidateSet::from_positions(p.iter().copied()));
        assert_eq!(
            naive_max_commutative(&symmetric_pair(), Deadline::none()).unwrap().best,
            s(&[0, 1])
        );
        assert_eq!(
            naive_max_commutative(&last_two_symmetric(), Deadline::none())
                .unwrap()
                .best,
            s(&[1, 2])
        );
        let unique: Vec<String> = (1..=16).map(|i| i.to_string()).collect();
        let f = Factor::from_strs("u", bools(&["A", "B", "C", "D"]), &unique).unwrap();
        let out = naive_max_commutative(&f, Deadline::none()).unwrap();
        assert_eq!(out.best, None);
        assert_eq!(out.subsets_tested, 16 - 4 - 1);
    }

    #[test]
    fn constant_factor_tests_one_subset() {
        let f = Factor::from_strs("c", bools(&["A", "B", "C", "D"]), &["5"; 16]).unwrap();
        let out = naive_max_commutative(&f, Deadline::none()).unwrap();
        assert_eq!(out.subsets_tested, 1);
        assert_eq!(out.best.unwrap().len(), 4);
    }

    #[test]
    fn mixed_range_subsets_are_not_scanned() {
        let args = vec![
            RandomVariable::boolean("A"),
            RandomVariable::new("B", ["x", "y", "z"]).unwrap(),
        ];
        let f = Factor::from_strs("f", args, &["1"; 6]).unwrap();
        let out = naive_max_commutative(&f, Deadline::none()).unwrap();
        assert_eq!(
            out,
            NaiveOutcome {
                best: None,
                subsets_tested: 0
            }
        );
    }

    #[test]
    fn result_is_maximum() {
        // Exhaustive over Boolean 3-argument tables with a two-value alphabet.
        for mask in 0u32..256 {
            let table: Vec<&str> = (0..8).map(|i| if mask >> i & 1 == 1 { "2" } else { "1" }).collect();
            let f = Factor::from_strs("f", bools(&["A", "B", "C"]), &table).unwrap();
            let best = naive_max_commutative(&f, Deadline::none()).unwrap().best;
            let largest = (0..3)
                .powerset()
                .filter(|s| s.len() >= 2 && is_commutative(&f, s).unwrap())
                .map(|s| s.len())
                .max();
            assert_eq!(best.map(|b| b.len()), largest);
        }
    }

    #[test]
    fn expired_deadline_times_out() {
        let d = Deadline::after(std::time::Duration::ZERO);
        assert_eq!(naive_max_commutative(&last_two_symmetric(), d), Err(Timeout));
    }
}
