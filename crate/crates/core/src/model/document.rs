//! The JSON network document.
//!
//! ```json
//! {"nodes": [{"name": "A", "states": ["0", "1"], "parents": [],
//!             "cpt": [{"given": [], "p": [0.2, 0.8]}]}]}
//! ```
//!
//! `given` lists one state label per parent, in parent order. Rows may appear
//! in any order in the input; they are emitted in canonical order (last parent
//! varying fastest). An optional top-level `provenance` object carries fixture
//! metadata.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{config_digits, config_index, BayesianNetwork, ConditionalTable, NodeId, NodeSpec};
use crate::error::{Error, Result};
use crate::fixtures::Provenance;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    nodes: Vec<NodeRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRepr {
    name: String,
    states: Vec<String>,
    #[serde(default)]
    parents: Vec<String>,
    cpt: Vec<RowRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowRepr {
    #[serde(default)]
    given: Vec<String>,
    p: Vec<f64>,
}

/// Parses and validates a network document.
pub fn parse_network(text: &str) -> Result<BayesianNetwork> {
    parse_document(text).map(|(bn, _)| bn)
}

/// Parses a network document together with its optional provenance block.
pub fn parse_document(text: &str) -> Result<(BayesianNetwork, Option<Provenance>)> {
    let repr: DocumentRepr = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            Error::Schema(e.to_string())
        } else {
            Error::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    })?;

    let states_by_name: HashMap<&str, &[String]> = repr
        .nodes
        .iter()
        .map(|n| (n.name.as_str(), n.states.as_slice()))
        .collect();

    let mut nodes = Vec::with_capacity(repr.nodes.len());
    for node in &repr.nodes {
        let parent_states: Option<Vec<&[String]>> = node
            .parents
            .iter()
            .map(|p| states_by_name.get(p.as_str()).copied())
            .collect();
        let rows = match parent_states {
            Some(parent_states) => order_rows(node, &parent_states)?,
            // Unresolved parents: keep rows as given and let validation
            // report the dangling reference.
            None => node.cpt.iter().map(|r| r.p.clone()).collect(),
        };
        nodes.push(NodeSpec {
            id: NodeId::new(node.name.clone()),
            states: node.states.clone(),
            parents: node.parents.iter().map(|p| NodeId::new(p.clone())).collect(),
            cpt: ConditionalTable::from_rows(rows),
        });
    }

    let bn = BayesianNetwork::new(nodes)?;
    Ok((bn, repr.provenance))
}

fn order_rows(node: &NodeRepr, parent_states: &[&[String]]) -> Result<Vec<Vec<f64>>> {
    let radices: Vec<usize> = parent_states.iter().map(|s| s.len()).collect();
    let expected: usize = radices.iter().product();
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; expected];

    for row in &node.cpt {
        if row.given.len() != parent_states.len() {
            return Err(Error::Schema(format!(
                "node `{}`: `given` {:?} has {} labels, expected {}",
                node.name,
                row.given,
                row.given.len(),
                parent_states.len()
            )));
        }
        let mut digits = Vec::with_capacity(row.given.len());
        for ((label, states), parent) in row.given.iter().zip(parent_states).zip(&node.parents) {
            let digit = states.iter().position(|s| s == label).ok_or_else(|| {
                Error::Schema(format!(
                    "node `{}`: parent `{parent}` has no state `{label}`",
                    node.name
                ))
            })?;
            digits.push(digit);
        }
        let slot = &mut rows[config_index(&digits, &radices)];
        if slot.is_some() {
            return Err(Error::Schema(format!(
                "node `{}`: duplicate CPT row for given {:?}",
                node.name, row.given
            )));
        }
        *slot = Some(row.p.clone());
    }

    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.ok_or_else(|| {
                let given: Vec<&str> = config_digits(i, &radices)
                    .iter()
                    .zip(parent_states)
                    .map(|(&d, states)| states[d].as_str())
                    .collect();
                Error::Schema(format!(
                    "node `{}`: missing CPT row for given {given:?}",
                    node.name
                ))
            })
        })
        .collect()
}

/// Serializes a network in canonical row order.
pub fn emit_network(bn: &BayesianNetwork) -> String {
    emit_document(bn, None)
}

pub fn emit_document(bn: &BayesianNetwork, provenance: Option<&Provenance>) -> String {
    let nodes = bn
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let parents = bn.parent_indices(i);
            let radices = bn.parent_radices(i);
            let cpt = node
                .cpt
                .rows()
                .iter()
                .enumerate()
                .map(|(r, p)| RowRepr {
                    given: config_digits(r, &radices)
                        .iter()
                        .zip(&parents)
                        .map(|(&d, &pi)| bn.nodes()[pi].states[d].clone())
                        .collect(),
                    p: p.clone(),
                })
                .collect();
            NodeRepr {
                name: node.id.to_string(),
                states: node.states.clone(),
                parents: node.parents.iter().map(ToString::to_string).collect(),
                cpt,
            }
        })
        .collect();
    let repr = DocumentRepr {
        nodes,
        provenance: provenance.cloned(),
    };
    let mut text = serde_json::to_string_pretty(&repr).expect("document serialization");
    text.push('\n');
    text
}
