//! Discrete Bayesian networks: nodes, conditional tables, validation and
//! ordering.
//!
//! A network is an ordered list of [`NodeSpec`]s. Each node owns an ordered
//! list of state labels (index 0 is state "0") and a [`ConditionalTable`]
//! with one row per configuration of its parents. Parent configurations are
//! enumerated row-major over the parents list, last parent varying fastest.

mod document;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use document::{emit_document, emit_network, parse_document, parse_network};

/// Absolute tolerance on the sum of every probability row.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Self {
        NodeId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

/// Probability rows indexed by parent configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    rows: Vec<Vec<f64>>,
}

impl ConditionalTable {
    /// Rows must already be in canonical configuration order.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        ConditionalTable { rows }
    }

    /// Table of a root node.
    pub fn root(probs: Vec<f64>) -> Self {
        ConditionalTable { rows: vec![probs] }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, config_index: usize) -> &[f64] {
        &self.rows[config_index]
    }

    pub fn rows_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: NodeId,
    pub states: Vec<String>,
    pub parents: Vec<NodeId>,
    pub cpt: ConditionalTable,
}

impl NodeSpec {
    pub fn new(
        id: impl Into<String>,
        states: &[&str],
        parents: &[&str],
        rows: Vec<Vec<f64>>,
    ) -> Self {
        NodeSpec {
            id: NodeId::new(id),
            states: states.iter().map(|s| s.to_string()).collect(),
            parents: parents.iter().map(|&p| NodeId::from(p)).collect(),
            cpt: ConditionalTable::from_rows(rows),
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_root(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }
}

/// One violated network invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyName { index: usize },
    DuplicateName(String),
    TooFewStates { node: String, states: usize },
    DuplicateState { node: String, label: String },
    UnknownParent { node: String, parent: String },
    SelfParent { node: String },
    DuplicateParent { node: String, parent: String },
    Cycle(Vec<String>),
    RowCount { node: String, expected: usize, got: usize },
    RowLength { node: String, row: usize, expected: usize, got: usize },
    OutOfRange { node: String, row: usize, value: f64 },
    RowSum { node: String, row: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyName { index } => write!(f, "node #{index} has an empty name"),
            Violation::DuplicateName(n) => write!(f, "duplicate node name `{n}`"),
            Violation::TooFewStates { node, states } => {
                write!(f, "node `{node}` has {states} states, at least 2 required")
            }
            Violation::DuplicateState { node, label } => {
                write!(f, "node `{node}` repeats state label `{label}`")
            }
            Violation::UnknownParent { node, parent } => {
                write!(f, "node `{node}` references unknown parent `{parent}`")
            }
            Violation::SelfParent { node } => write!(f, "node `{node}` lists itself as a parent"),
            Violation::DuplicateParent { node, parent } => {
                write!(f, "node `{node}` lists parent `{parent}` twice")
            }
            Violation::Cycle(nodes) => write!(f, "cycle through nodes {}", nodes.join(", ")),
            Violation::RowCount {
                node,
                expected,
                got,
            } => write!(f, "node `{node}` has {got} CPT rows, expected {expected}"),
            Violation::RowLength {
                node,
                row,
                expected,
                got,
            } => write!(
                f,
                "node `{node}` CPT row {row} has {got} entries, expected {expected}"
            ),
            Violation::OutOfRange { node, row, value } => {
                write!(f, "node `{node}` CPT row {row} has probability {value} outside [0, 1]")
            }
            Violation::RowSum { node, row, sum } => {
                write!(f, "node `{node}` CPT row {row} sums to {sum}, expected 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesianNetwork {
    nodes: Vec<NodeSpec>,
}

impl BayesianNetwork {
    /// Builds a network, rejecting it if any invariant is violated.
    pub fn new(nodes: Vec<NodeSpec>) -> Result<Self> {
        let bn = BayesianNetwork { nodes };
        let violations = bn.validate();
        if violations.is_empty() {
            Ok(bn)
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Builds a network without checking it. Use [`validate`](Self::validate)
    /// to inspect the result.
    pub fn from_nodes_unchecked(nodes: Vec<NodeSpec>) -> Self {
        BayesianNetwork { nodes }
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeSpec> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id.as_str() == name)
    }

    pub fn node(&self, name: &str) -> Option<&NodeSpec> {
        self.index_of(name).map(|i| &self.nodes[i])
    }

    /// Parent indices of node `i`. Unknown parents are skipped.
    pub fn parent_indices(&self, i: usize) -> Vec<usize> {
        self.nodes[i]
            .parents
            .iter()
            .filter_map(|p| self.index_of(p.as_str()))
            .collect()
    }

    /// State counts of node `i`'s parents, in parent order.
    pub fn parent_radices(&self, i: usize) -> Vec<usize> {
        self.parent_indices(i)
            .into_iter()
            .map(|p| self.nodes[p].num_states())
            .collect()
    }

    /// Lists every violated invariant; an empty list means the network is
    /// valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (index, node) in self.nodes.iter().enumerate() {
            if node.id.as_str().is_empty() {
                out.push(Violation::EmptyName { index });
            } else if !seen.insert(node.id.as_str()) {
                out.push(Violation::DuplicateName(node.id.to_string()));
            }
        }

        for node in &self.nodes {
            let name = node.id.to_string();
            if node.states.len() < 2 {
                out.push(Violation::TooFewStates {
                    node: name.clone(),
                    states: node.states.len(),
                });
            }
            let mut labels = HashSet::new();
            for label in &node.states {
                if !labels.insert(label) {
                    out.push(Violation::DuplicateState {
                        node: name.clone(),
                        label: label.clone(),
                    });
                }
            }

            let mut parents_resolved = true;
            let mut seen_parents = HashSet::new();
            for parent in &node.parents {
                if parent == &node.id {
                    out.push(Violation::SelfParent { node: name.clone() });
                    parents_resolved = false;
                } else if self.index_of(parent.as_str()).is_none() {
                    out.push(Violation::UnknownParent {
                        node: name.clone(),
                        parent: parent.to_string(),
                    });
                    parents_resolved = false;
                }
                if !seen_parents.insert(parent) {
                    out.push(Violation::DuplicateParent {
                        node: name.clone(),
                        parent: parent.to_string(),
                    });
                }
            }

            if parents_resolved {
                let expected: usize = node
                    .parents
                    .iter()
                    .filter_map(|p| self.node(p.as_str()))
                    .map(NodeSpec::num_states)
                    .product();
                if node.cpt.len() != expected {
                    out.push(Violation::RowCount {
                        node: name.clone(),
                        expected,
                        got: node.cpt.len(),
                    });
                }
            }

            for (row_index, row) in node.cpt.rows().iter().enumerate() {
                if row.len() != node.states.len() {
                    out.push(Violation::RowLength {
                        node: name.clone(),
                        row: row_index,
                        expected: node.states.len(),
                        got: row.len(),
                    });
                }
                let mut in_range = true;
                for &value in row {
                    if !(0.0..=1.0).contains(&value) {
                        out.push(Violation::OutOfRange {
                            node: name.clone(),
                            row: row_index,
                            value,
                        });
                        in_range = false;
                    }
                }
                let sum: f64 = row.iter().sum();
                if in_range && (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    out.push(Violation::RowSum {
                        node: name.clone(),
                        row: row_index,
                        sum,
                    });
                }
            }
        }

        if let Err(remaining) = self.kahn_order() {
            out.push(Violation::Cycle(
                remaining
                    .into_iter()
                    .map(|i| self.nodes[i].id.to_string())
                    .collect(),
            ));
        }
        out
    }

    /// Node indices in topological order, ties broken by document order.
    pub fn topological_indices(&self) -> Result<Vec<usize>> {
        self.kahn_order().map_err(|remaining| {
            Error::Cycle(
                remaining
                    .into_iter()
                    .map(|i| self.nodes[i].id.to_string())
                    .collect(),
            )
        })
    }

    /// Kahn's algorithm that always releases the earliest ready node. On a
    /// cycle, returns the nodes that could not be ordered.
    fn kahn_order(&self) -> std::result::Result<Vec<usize>, Vec<usize>> {
        let n = self.nodes.len();
        let index: HashMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| (node.id.as_str(), i))
            .collect();
        let mut pending = vec![0usize; n];
        let mut children = vec![Vec::new(); n];
        for (i, node) in self.nodes.iter().enumerate() {
            let parents: HashSet<usize> = node
                .parents
                .iter()
                .filter_map(|p| index.get(p.as_str()).copied())
                .collect();
            pending[i] = parents.len();
            for p in parents {
                children[p].push(i);
            }
        }

        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| pending[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &c in &children[i] {
                pending[c] -= 1;
                if pending[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            let placed: HashSet<usize> = order.into_iter().collect();
            Err((0..n).filter(|i| !placed.contains(i)).collect())
        }
    }
}

/// Every node appears after all of its parents; ties are broken by document
/// order.
pub fn topological_order(bn: &BayesianNetwork) -> Result<Vec<NodeId>> {
    Ok(bn
        .topological_indices()?
        .into_iter()
        .map(|i| bn.nodes[i].id.clone())
        .collect())
}

pub fn validate(bn: &BayesianNetwork) -> Vec<Violation> {
    bn.validate()
}

/// Row index of a parent configuration (last position varies fastest).
pub fn config_index(config: &[usize], radices: &[usize]) -> usize {
    config
        .iter()
        .zip(radices)
        .fold(0, |acc, (&digit, &radix)| acc * radix + digit)
}

/// Inverse of [`config_index`].
pub fn config_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &radix) in digits.iter_mut().zip(radices).rev() {
        *slot = index % radix;
        index /= radix;
    }
    digits
}
