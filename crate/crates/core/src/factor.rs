//! Random variables, factors and their dense potential tables.
//!
//! Tables are row-major with the last argument varying fastest, so for two
//! Boolean arguments the rows are `(t,t), (t,f), (f,t), (f,f)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::potential::Potential;

/// A named variable with an ordered finite range and optional evidence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RandomVariable {
    name: String,
    range: Vec<String>,
    evidence: Option<usize>,
}

impl RandomVariable {
    pub fn new<S: Into<String>>(name: impl Into<String>, range: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let range: Vec<String> = range.into_iter().map(Into::into).collect();
        let invalid = |reason: &str| Error::InvalidRange {
            name: name.clone(),
            reason: reason.to_string(),
        };
        if name.is_empty() {
            return Err(invalid("empty name"));
        }
        if range.len() < 2 {
            return Err(invalid("range needs at least two values"));
        }
        if range.iter().any(String::is_empty) {
            return Err(invalid("empty range value"));
        }
        for (i, label) in range.iter().enumerate() {
            if range[..i].contains(label) {
                return Err(invalid(&format!("duplicate range value `{label}`")));
            }
        }
        Ok(RandomVariable {
            name,
            range,
            evidence: None,
        })
    }

    /// A variable with range `["true", "false"]`.
    pub fn boolean(name: impl Into<String>) -> Self {
        Self::new(name, ["true", "false"]).expect("boolean range is valid")
    }

    /// Sets observed evidence; the label must belong to the range.
    pub fn with_evidence(mut self, label: &str) -> Result<Self> {
        self.evidence = Some(self.value_index(label).ok_or_else(|| Error::InvalidEvidence {
            name: self.name.clone(),
            value: label.to_string(),
        })?);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn range(&self) -> &[String] {
        &self.range
    }

    pub fn range_size(&self) -> usize {
        self.range.len()
    }

    pub fn evidence(&self) -> Option<&str> {
        self.evidence.map(|i| self.range[i].as_str())
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.range.iter().position(|v| v == label)
    }
}

/// One value index per factor argument, in argument order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

/// A factor: ordered arguments and a dense table of exact potentials.
#[derive(Debug, Clone)]
pub struct Factor {
    name: String,
    args: Vec<RandomVariable>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    table: Vec<Potential>,
    /// `table[i] == table[j]` iff `ids[i] == ids[j]`; dense, in order of first occurrence.
    ids: Vec<u32>,
    distinct: usize,
}

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.args == other.args && self.table == other.table
    }
}

impl Eq for Factor {}

impl Factor {
    /// Validates and builds a factor. `potentials` is in row-major order.
    pub fn new(name: impl Into<String>, args: Vec<RandomVariable>, potentials: Vec<Potential>) -> Result<Self> {
        if args.is_empty() {
            return Err(Error::EmptyArguments);
        }
        for (i, arg) in args.iter().enumerate() {
            if args[..i].iter().any(|a| a.name == arg.name) {
                return Err(Error::DuplicateArgument(arg.name.clone()));
            }
        }
        let dims: Vec<usize> = args.iter().map(RandomVariable::range_size).collect();
        let expected = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::LengthMismatch {
                expected: usize::MAX,
                actual: potentials.len(),
            })?;
        if potentials.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: potentials.len(),
            });
        }
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut interned: HashMap<&Potential, u32> = HashMap::new();
        let ids: Vec<u32> = potentials
            .iter()
            .map(|p| {
                let next = interned.len() as u32;
                *interned.entry(p).or_insert(next)
            })
            .collect();
        let distinct = interned.len();
        Ok(Factor {
            name: name.into(),
            args,
            dims,
            strides,
            table: potentials,
            ids,
            distinct,
        })
    }

    /// Builds a factor from decimal strings.
    pub fn from_strs<S: AsRef<str>>(
        name: impl Into<String>,
        args: Vec<RandomVariable>,
        potentials: &[S],
    ) -> Result<Self> {
        let table = potentials
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<Potential>>>()?;
        Self::new(name, args, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[RandomVariable] {
        &self.args
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Range size of every argument, in argument order.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn table(&self) -> &[Potential] {
        &self.table
    }

    /// Interned potential identifiers, one per row.
    pub fn potential_ids(&self) -> &[u32] {
        &self.ids
    }

    /// Number of distinct potential values in the table.
    pub fn distinct_potentials(&self) -> usize {
        self.distinct
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Value index of argument `position` in table row `row`.
    #[inline]
    pub fn value_at(&self, row: usize, position: usize) -> usize {
        (row / self.strides[position]) % self.dims[position]
    }

    /// Decodes a row index into an assignment.
    pub fn assignment(&self, row: usize) -> Assignment {
        Assignment((0..self.arity()).map(|p| self.value_at(row, p)).collect())
    }

    /// Encodes an assignment into its row index.
    pub fn row_index(&self, assignment: &Assignment) -> Result<usize> {
        let values = assignment.values();
        if values.len() != self.arity() {
            return Err(Error::InvalidAssignment(format!(
                "expected {} values, got {}",
                self.arity(),
                values.len()
            )));
        }
        values
            .iter()
            .zip(&self.dims)
            .zip(&self.strides)
            .try_fold(0usize, |acc, ((&v, &d), &s)| {
                if v < d {
                    Ok(acc + v * s)
                } else {
                    Err(Error::InvalidAssignment(format!(
                        "value index {v} outside range of size {d}"
                    )))
                }
            })
    }

    /// Encodes an assignment given as range labels.
    pub fn assignment_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Assignment> {
        if labels.len() != self.arity() {
            return Err(Error::InvalidAssignment(format!(
                "expected {} values, got {}",
                self.arity(),
                labels.len()
            )));
        }
        labels
            .iter()
            .zip(&self.args)
            .map(|(label, arg)| {
                arg.value_index(label.as_ref()).ok_or_else(|| {
                    Error::InvalidAssignment(format!("`{}` is not in the range of `{}`", label.as_ref(), arg.name))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }

    pub fn potential_of(&self, assignment: &Assignment) -> Result<&Potential> {
        Ok(&self.table[self.row_index(assignment)?])
    }

    /// Iterates `(assignment, potential)` over all rows in table order.
    pub fn rows(&self) -> impl Iterator<Item = (Assignment, &Potential)> + '_ {
        self.table.iter().enumerate().map(|(row, p)| (self.assignment(row), p))
    }

    /// Positions of all arguments.
    pub fn positions(&self) -> std::ops::Range<usize> {
        0..self.arity()
    }

    pub fn same_range(&self, a: usize, b: usize) -> bool {
        self.args[a].range == self.args[b].range
    }

    /// Checks that every position is in bounds.
    pub fn check_positions(&self, positions: &[usize]) -> Result<()> {
        match positions.iter().find(|&&p| p >= self.arity()) {
            Some(&position) => Err(Error::InvalidSubset {
                position,
                arity: self.arity(),
            }),
            None => Ok(()),
        }
    }

    /// Reorders the arguments so that new argument `i` is old argument
    /// `permutation[i]`, rewriting the table so every assignment keeps its
    /// potential.
    pub fn apply_argument_permutation(&self, permutation: &[usize]) -> Result<Factor> {
        let n = self.arity();
        let mut seen = vec![false; n];
        if permutation.len() != n {
            return Err(Error::InvalidPermutation { arity: n });
        }
        for &p in permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation { arity: n });
            }
        }
        let args: Vec<RandomVariable> = permutation.iter().map(|&p| self.args[p].clone()).collect();
        let new_dims: Vec<usize> = args.iter().map(RandomVariable::range_size).collect();
        let mut new_strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            new_strides[i] = new_strides[i + 1] * new_dims[i + 1];
        }
        let mut table = self.table.clone();
        for (row, potential) in self.table.iter().enumerate() {
            let target: usize = permutation
                .iter()
                .zip(&new_strides)
                .map(|(&old, &stride)| self.value_at(row, old) * stride)
                .sum();
            table[target] = potential.clone();
        }
        Factor::new(self.name.clone(), args, table)
    }

    /// Same factor under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Factor {
        Factor {
            name: name.into(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn bools(names: &[&str]) -> Vec<RandomVariable> {
        names.iter().map(|n| RandomVariable::boolean(*n)).collect()
    }

    /// Two Boolean arguments, `phi(t,f) = phi(f,t)`.
    pub fn symmetric_pair() -> Factor {
        Factor::from_strs("phi", bools(&["R1", "R2"]), &["1", "2", "2", "3"]).unwrap()
    }

    /// Three Boolean arguments, commutative in the last two.
    pub fn last_two_symmetric() -> Factor {
        Factor::from_strs(
            "phi",
            bools(&["R1", "R2", "R3"]),
            &["1", "2", "2", "3", "4", "5", "5", "6"],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn p(s: &str) -> Potential {
        s.parse().unwrap()
    }

    #[test]
    fn symmetric_pair_lookups() {
        let f = symmetric_pair();
        assert_eq!(
            f.potential_of(&f.assignment_from_labels(&["true", "false"]).unwrap())
                .unwrap(),
            &p("2")
        );
        assert_eq!(
            f.potential_of(&f.assignment_from_labels(&["false", "true"]).unwrap())
                .unwrap(),
            &p("2")
        );
        assert_eq!(
            f.potential_of(&f.assignment_from_labels(&["false", "false"]).unwrap())
                .unwrap(),
            &p("3")
        );
    }

    #[test]
    fn last_two_symmetric_lookup() {
        let f = last_two_symmetric();
        let a = f.assignment_from_labels(&["true", "false", "true"]).unwrap();
        assert_eq!(f.potential_of(&a).unwrap(), &p("2"));
    }

    #[test]
    fn construction_errors() {
        let one = Factor::from_strs("f", bools(&["A"]), &["1", "1"]).unwrap();
        assert_eq!(one.len(), 2);
        assert!(matches!(
            Factor::from_strs("f", bools(&["A", "B"]), &["1", "2", "3"]),
            Err(Error::LengthMismatch { expected: 4, actual: 3 })
        ));
        assert!(matches!(
            Factor::from_strs("f", bools(&["A", "A"]), &["1", "2", "3", "4"]),
            Err(Error::DuplicateArgument(_))
        ));
        assert!(matches!(
            Factor::from_strs("f", bools(&["A"]), &["1", "0"]),
            Err(Error::NonPositivePotential(_))
        ));
        assert!(matches!(
            Factor::from_strs::<&str>("f", vec![], &[]),
            Err(Error::EmptyArguments)
        ));
    }

    #[test]
    fn invalid_assignment() {
        let f = symmetric_pair();
        assert!(matches!(
            f.potential_of(&Assignment(vec![0])),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(matches!(
            f.potential_of(&Assignment(vec![0, 2])),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(f.assignment_from_labels(&["true", "maybe"]).is_err());
    }

    #[test]
    fn variable_validation() {
        assert!(RandomVariable::new("x", ["a"]).is_err());
        assert!(RandomVariable::new("x", ["a", "a"]).is_err());
        assert!(RandomVariable::new("", ["a", "b"]).is_err());
        assert!(RandomVariable::boolean("x").with_evidence("maybe").is_err());
        assert_eq!(
            RandomVariable::boolean("x").with_evidence("false").unwrap().evidence(),
            Some("false")
        );
    }

    #[test]
    fn row_major_last_argument_fastest() {
        let f = last_two_symmetric();
        let rows: Vec<Vec<usize>> = (0..8).map(|r| f.assignment(r).0).collect();
        assert_eq!(rows[1], vec![0, 0, 1]);
        assert_eq!(rows[4], vec![1, 0, 0]);
        for r in 0..8 {
            assert_eq!(f.row_index(&f.assignment(r)).unwrap(), r);
        }
    }

    #[test]
    fn interned_ids_follow_equality() {
        let f = last_two_symmetric();
        assert_eq!(f.potential_ids(), &[0, 1, 1, 2, 3, 4, 4, 5]);
        assert_eq!(f.distinct_potentials(), 6);
    }

    #[test]
    fn permutation_identity_and_swaps() {
        let f = last_two_symmetric();
        assert_eq!(f.apply_argument_permutation(&[0, 1, 2]).unwrap(), f);

        let g = symmetric_pair();
        let swapped = g.apply_argument_permutation(&[1, 0]).unwrap();
        assert_eq!(swapped.table(), g.table());
        assert_eq!(swapped.args()[0].name(), "R2");

        let s = f.apply_argument_permutation(&[1, 0, 2]).unwrap();
        let a = s.assignment_from_labels(&["true", "false", "true"]).unwrap();
        assert_eq!(s.potential_of(&a).unwrap(), &p("4"));
        // Full enumeration against the source rows.
        for (assignment, potential) in f.rows() {
            let v = assignment.values();
            let moved = Assignment(vec![v[1], v[0], v[2]]);
            assert_eq!(s.potential_of(&moved).unwrap(), potential);
        }
    }

    #[test]
    fn permutation_rejects_non_permutations() {
        let f = last_two_symmetric();
        for bad in [&[0, 1][..], &[0, 0, 1], &[0, 1, 3]] {
            assert!(matches!(
                f.apply_argument_permutation(bad),
                Err(Error::InvalidPermutation { .. })
            ));
        }
    }
}
