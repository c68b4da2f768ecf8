//! Colour passing over a factor graph.
//!
//! Variables start coloured by range and evidence; factors by their tables up
//! to argument order. Each round, factors collect the colours of their
//! arguments (in argument order) and are recoloured, then variables collect
//! `(factor colour, position)` pairs from their factors and are recoloured.
//! A factor commutative in a set of arguments sends position 0 to those
//! arguments. Rounds repeat until neither partition changes.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::candidates::{max_candidate, CandidateSet};
use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::graph::FactorGraph;
use crate::search::decor;

/// Default arity up to which factors are matched by brute-force argument
/// permutation.
pub const DEFAULT_ARITY_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colour(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    pub variable_colours: Vec<Colour>,
    pub factor_colours: Vec<Colour>,
    pub round: usize,
}

/// Observed values, by variable index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence(BTreeMap<usize, usize>);

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evidence declared on the graph's variables.
    pub fn from_graph(graph: &FactorGraph) -> Self {
        Evidence(
            graph
                .variables()
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.evidence().and_then(|e| v.value_index(e)).map(|e| (i, e)))
                .collect(),
        )
    }

    pub fn observe(&mut self, graph: &FactorGraph, variable: &str, value: &str) -> Result<()> {
        let index = graph
            .variables()
            .iter()
            .position(|v| v.name() == variable)
            .ok_or_else(|| Error::UnknownVariable(variable.to_string()))?;
        let value_index = graph.variables()[index]
            .value_index(value)
            .ok_or_else(|| Error::InvalidEvidence {
                name: variable.to_string(),
                value: value.to_string(),
            })?;
        self.0.insert(index, value_index);
        Ok(())
    }

    pub fn get(&self, variable: usize) -> Option<usize> {
        self.0.get(&variable).copied()
    }
}

/// Node partitions by final colour; member names and groups are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grouping {
    pub variable_groups: Vec<Vec<String>>,
    pub factor_groups: Vec<Vec<String>>,
}

impl Grouping {
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Dense colour ids by first appearance of each key.
fn recolour<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Vec<Colour> {
    let mut ids: HashMap<K, u32> = HashMap::new();
    keys.into_iter()
        .map(|k| {
            let next = ids.len() as u32;
            Colour(*ids.entry(k).or_insert(next))
        })
        .collect()
}

fn distinct(colours: &[Colour]) -> usize {
    colours.iter().unique().count()
}

/// Variables share a colour iff they have the same range and the same evidence.
pub fn initial_variable_colours(graph: &FactorGraph, evidence: &Evidence) -> Vec<Colour> {
    recolour(
        graph
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.range(), evidence.get(i))),
    )
}

/// Initial factor colours plus, per factor, the argument order under which
/// its table equals its colour class representative.
#[derive(Debug, Clone)]
pub struct FactorArrangement {
    pub colours: Vec<Colour>,
    /// `order[f][i]` is the original position of factor `f` moved to position `i`.
    pub order: Vec<Vec<usize>>,
    /// Factors with arguments rearranged by `order`.
    pub arranged: Vec<Factor>,
}

/// Factors share a colour iff some argument order of one gives a table equal
/// row by row to the other's. Permutations are searched exhaustively for
/// factors up to `arity_limit` arguments.
pub fn initial_factor_colours(graph: &FactorGraph, arity_limit: usize) -> Result<FactorArrangement> {
    let mut representatives: Vec<(Factor, Vec<&crate::potential::Potential>)> = Vec::new();
    let mut colours = Vec::new();
    let mut order = Vec::new();
    let mut arranged = Vec::new();
    for factor in graph.factors() {
        let mut sorted: Vec<_> = factor.table().iter().collect();
        sorted.sort_unstable();
        let identity: Vec<usize> = factor.positions().collect();
        let mut matched = None;
        for (colour, (rep, rep_sorted)) in representatives.iter().enumerate() {
            if rep.arity() != factor.arity() || *rep_sorted != sorted {
                continue;
            }
            if let Some(perm) = matching_order(factor, rep, &identity, arity_limit)? {
                matched = Some((colour, perm));
                break;
            }
        }
        let (colour, perm) = match matched {
            Some(m) => m,
            None => {
                representatives.push((factor.clone(), sorted));
                (representatives.len() - 1, identity)
            }
        };
        arranged.push(factor.apply_argument_permutation(&perm)?);
        colours.push(Colour(colour as u32));
        order.push(perm);
    }
    Ok(FactorArrangement {
        colours,
        order,
        arranged,
    })
}

fn matching_order(factor: &Factor, rep: &Factor, identity: &[usize], arity_limit: usize) -> Result<Option<Vec<usize>>> {
    let fits = |perm: &[usize]| -> Result<bool> {
        if perm
            .iter()
            .enumerate()
            .any(|(i, &p)| factor.args()[p].range() != rep.args()[i].range())
        {
            return Ok(false);
        }
        Ok(factor.apply_argument_permutation(perm)?.table() == rep.table())
    };
    if fits(identity)? {
        return Ok(Some(identity.to_vec()));
    }
    if factor.arity() > arity_limit {
        return Err(Error::ArityLimitExceeded {
            arity: factor.arity(),
            limit: arity_limit,
        });
    }
    for perm in factor.positions().permutations(factor.arity()) {
        if fits(&perm)? {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

/// Adjacency used by colour passing, with factor arguments in arranged order.
#[derive(Debug, Clone)]
pub struct ColourGraph {
    /// Variable index of each argument, per factor.
    pub factor_args: Vec<Vec<usize>>,
    /// `(factor, zero-based position)` for every edge at a variable, in factor order.
    pub variable_edges: Vec<Vec<(usize, usize)>>,
}

impl ColourGraph {
    pub fn new(graph: &FactorGraph, arrangement: &FactorArrangement) -> Self {
        let factor_args: Vec<Vec<usize>> = (0..graph.factors().len())
            .map(|f| arrangement.order[f].iter().map(|&p| graph.factor_args(f)[p]).collect())
            .collect();
        let mut variable_edges = vec![Vec::new(); graph.variables().len()];
        for (f, args) in factor_args.iter().enumerate() {
            for (position, &v) in args.iter().enumerate() {
                variable_edges[v].push((f, position));
            }
        }
        ColourGraph {
            factor_args,
            variable_edges,
        }
    }
}

/// One round: factors first, then variables using the new factor colours.
///
/// `commutative[f]` holds the positions (in arranged order) whose arguments
/// receive position 0 from factor `f`.
pub fn pass_round(graph: &ColourGraph, colouring: &Colouring, commutative: &[Option<CandidateSet>]) -> Colouring {
    let factor_colours = recolour(graph.factor_args.iter().enumerate().map(|(f, args)| {
        let mut signature: Vec<Colour> = args.iter().map(|&v| colouring.variable_colours[v]).collect();
        signature.push(colouring.factor_colours[f]);
        signature
    }));
    let variable_colours = recolour(graph.variable_edges.iter().enumerate().map(|(v, edges)| {
        let mut messages: Vec<(Colour, usize)> = edges
            .iter()
            .map(|&(f, position)| {
                let suppressed = commutative[f].is_some_and(|s| s.contains(position));
                (factor_colours[f], if suppressed { 0 } else { position + 1 })
            })
            .collect();
        messages.sort_unstable();
        (messages, colouring.variable_colours[v])
    }));
    Colouring {
        variable_colours,
        factor_colours,
        round: colouring.round + 1,
    }
}

/// Groups variables and factors by colour passing to a fixpoint.
pub fn run_cpr(graph: &FactorGraph, evidence: &Evidence) -> Result<Grouping> {
    run_cpr_with_limit(graph, evidence, DEFAULT_ARITY_LIMIT)
}

pub fn run_cpr_with_limit(graph: &FactorGraph, evidence: &Evidence, arity_limit: usize) -> Result<Grouping> {
    let colouring = colour_to_fixpoint(graph, evidence, arity_limit)?;
    Ok(grouping(graph, &colouring))
}

/// Final colouring after the last round that changed nothing.
pub fn colour_to_fixpoint(graph: &FactorGraph, evidence: &Evidence, arity_limit: usize) -> Result<Colouring> {
    let arrangement = initial_factor_colours(graph, arity_limit)?;
    let commutative: Vec<Option<CandidateSet>> = arrangement
        .arranged
        .iter()
        .map(|f| max_candidate(&decor(f).candidates))
        .collect();
    let colour_graph = ColourGraph::new(graph, &arrangement);
    let mut colouring = Colouring {
        variable_colours: initial_variable_colours(graph, evidence),
        factor_colours: arrangement.colours,
        round: 0,
    };
    loop {
        let next = pass_round(&colour_graph, &colouring, &commutative);
        // Own colours are part of every signature, so partitions only refine.
        let unchanged = distinct(&next.variable_colours) == distinct(&colouring.variable_colours)
            && distinct(&next.factor_colours) == distinct(&colouring.factor_colours);
        colouring = next;
        if unchanged {
            return Ok(colouring);
        }
    }
}

fn groups_by_colour<'a>(names: impl Iterator<Item = &'a str>, colours: &[Colour]) -> Vec<Vec<String>> {
    let mut by_colour: BTreeMap<Colour, Vec<String>> = BTreeMap::new();
    for (name, colour) in names.zip(colours) {
        by_colour.entry(*colour).or_default().push(name.to_string());
    }
    let mut groups: Vec<Vec<String>> = by_colour
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    groups.sort();
    groups
}

pub fn grouping(graph: &FactorGraph, colouring: &Colouring) -> Grouping {
    Grouping {
        variable_groups: groups_by_colour(graph.variables().iter().map(|v| v.name()), &colouring.variable_colours),
        factor_groups: groups_by_colour(graph.factors().iter().map(|f| f.name()), &colouring.factor_colours),
    }
}
