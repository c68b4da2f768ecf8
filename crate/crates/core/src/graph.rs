//! Factor graphs and their JSON file format.
//!
//! ```json
//! {
//!   "variables": [{"name": "A", "range": ["true", "false"], "evidence": null}],
//!   "factors": [{"name": "phi", "args": ["A"], "table": ["1", "2.5"]}]
//! }
//! ```

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{Factor, RandomVariable};
use crate::potential::Potential;

/// A bipartite graph of variables and factors; edges follow factor arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorGraph {
    variables: Vec<RandomVariable>,
    factors: Vec<Factor>,
    /// Variable index of every factor argument.
    factor_args: Vec<Vec<usize>>,
}

impl FactorGraph {
    pub fn new(variables: Vec<RandomVariable>, factors: Vec<Factor>) -> Result<Self> {
        let mut by_name: HashMap<&str, usize> = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if by_name.insert(v.name(), i).is_some() {
                return Err(Error::DuplicateName(v.name().to_string()));
            }
        }
        let mut factor_names = HashSet::new();
        let mut factor_args = Vec::with_capacity(factors.len());
        for f in &factors {
            if !factor_names.insert(f.name()) {
                return Err(Error::DuplicateName(f.name().to_string()));
            }
            let args = f
                .args()
                .iter()
                .map(|arg| {
                    let &i = by_name
                        .get(arg.name())
                        .ok_or_else(|| Error::UnknownVariable(arg.name().to_string()))?;
                    if variables[i].range() != arg.range() {
                        return Err(Error::InvalidRange {
                            name: arg.name().to_string(),
                            reason: format!("factor `{}` uses a different range", f.name()),
                        });
                    }
                    Ok(i)
                })
                .collect::<Result<Vec<_>>>()?;
            factor_args.push(args);
        }
        Ok(FactorGraph {
            variables,
            factors,
            factor_args,
        })
    }

    pub fn variables(&self) -> &[RandomVariable] {
        &self.variables
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Variable indices of the arguments of factor `factor`.
    pub fn factor_args(&self, factor: usize) -> &[usize] {
        &self.factor_args[factor]
    }

    pub fn variable(&self, name: &str) -> Option<&RandomVariable> {
        self.variables.iter().find(|v| v.name() == name)
    }

    pub fn factor(&self, name: &str) -> Option<&Factor> {
        self.factors.iter().find(|f| f.name() == name)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GraphFile::from(self))?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    variables: Vec<VariableEntry>,
    #[serde(default)]
    factors: Vec<FactorEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableEntry {
    name: String,
    range: Vec<String>,
    #[serde(default)]
    evidence: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorEntry {
    name: String,
    args: Vec<String>,
    table: Vec<Potential>,
}

impl TryFrom<GraphFile> for FactorGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let variables = file
            .variables
            .into_iter()
            .map(|v| {
                let var = RandomVariable::new(v.name, v.range)?;
                match v.evidence {
                    Some(e) => var.with_evidence(&e),
                    None => Ok(var),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let factors = file
            .factors
            .into_iter()
            .map(|f| {
                let args = f
                    .args
                    .iter()
                    .map(|a| {
                        variables
                            .iter()
                            .find(|v| v.name() == a)
                            .cloned()
                            .ok_or_else(|| Error::UnknownVariable(a.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Factor::new(f.name, args, f.table)
            })
            .collect::<Result<Vec<_>>>()?;
        FactorGraph::new(variables, factors)
    }
}

impl From<&FactorGraph> for GraphFile {
    fn from(g: &FactorGraph) -> Self {
        GraphFile {
            variables: g
                .variables
                .iter()
                .map(|v| VariableEntry {
                    name: v.name().to_string(),
                    range: v.range().to_vec(),
                    evidence: v.evidence().map(str::to_string),
                })
                .collect(),
            factors: g
                .factors
                .iter()
                .map(|f| FactorEntry {
                    name: f.name().to_string(),
                    args: f.args().iter().map(|a| a.name().to_string()).collect(),
                    table: f.table().to_vec(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHARED_NEIGHBOUR: &str = r#"{
        "variables": [
            {"name": "A", "range": ["true", "false"], "evidence": null},
            {"name": "B", "range": ["true", "false"]},
            {"name": "C", "range": ["true", "false"], "evidence": "true"}
        ],
        "factors": [
            {"name": "phi1", "args": ["A", "B"], "table": ["1", "2", "3", "4"]},
            {"name": "phi2", "args": ["C", "B"], "table": ["1.0", "2", "3", 4]}
        ]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let g = FactorGraph::from_json_str(SHARED_NEIGHBOUR).unwrap();
        assert_eq!(g.variables().len(), 3);
        assert_eq!(g.factor_args(1), &[2, 1]);
        assert_eq!(g.variable("C").unwrap().evidence(), Some("true"));
        assert_eq!(g.factor("phi2").unwrap().table(), g.factor("phi1").unwrap().table());
        let again = FactorGraph::from_json_str(&g.to_json_string().unwrap()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn rejects_invalid_graphs() {
        let unknown = r#"{"variables": [{"name": "A", "range": ["t", "f"]}],
            "factors": [{"name": "f", "args": ["Z"], "table": ["1", "2"]}]}"#;
        assert!(matches!(
            FactorGraph::from_json_str(unknown),
            Err(Error::UnknownVariable(_))
        ));

        let dup = r#"{"variables": [{"name": "A", "range": ["t", "f"]}, {"name": "A", "range": ["t", "f"]}]}"#;
        assert!(matches!(FactorGraph::from_json_str(dup), Err(Error::DuplicateName(_))));

        let bad_evidence = r#"{"variables": [{"name": "A", "range": ["t", "f"], "evidence": "x"}]}"#;
        assert!(matches!(
            FactorGraph::from_json_str(bad_evidence),
            Err(Error::InvalidEvidence { .. })
        ));

        let zero = r#"{"variables": [{"name": "A", "range": ["t", "f"]}],
            "factors": [{"name": "f", "args": ["A"], "table": ["1", "0"]}]}"#;
        assert!(FactorGraph::from_json_str(zero).is_err());

        let short = r#"{"variables": [{"name": "A", "range": ["t", "f"]}],
            "factors": [{"name": "f", "args": ["A"], "table": ["1"]}]}"#;
        assert!(matches!(
            FactorGraph::from_json_str(short),
            Err(Error::LengthMismatch { .. })
        ));

        assert!(matches!(FactorGraph::from_json_str("{"), Err(Error::Json(_))));
    }
}
