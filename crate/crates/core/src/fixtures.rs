//! Bundled example networks.
//!
//! Each fixture is a network document with a `provenance` block recording
//! where its numbers come from and the marginals it is expected to
//! reproduce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{parse_document, BayesianNetwork, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranscriptionStatus {
    Complete,
    /// CPTs could not be fully recovered from text; values are placeholders.
    FigureDependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueTag {
    /// Printed in the source.
    Published,
    /// Computed from other published numbers.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedMarginal {
    pub node: String,
    pub state: String,
    pub p: f64,
    pub tag: ValueTag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub source: String,
    pub transcription_status: TranscriptionStatus,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default)]
    pub expected_marginals: Vec<ExpectedMarginal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixtureId {
    Bn3,
    Oil4,
    Liquidity10,
    Bankruptcy9,
    BankruptcyBCh,
}

impl FixtureId {
    pub const ALL: [FixtureId; 5] = [
        FixtureId::Bn3,
        FixtureId::Oil4,
        FixtureId::Liquidity10,
        FixtureId::Bankruptcy9,
        FixtureId::BankruptcyBCh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Bn3 => "bn3",
            FixtureId::Oil4 => "oil4",
            FixtureId::Liquidity10 => "liquidity10",
            FixtureId::Bankruptcy9 => "bankruptcy9",
            FixtureId::BankruptcyBCh => "bankruptcy_b_ch",
        }
    }

    /// Raw document text.
    pub fn document(self) -> &'static str {
        match self {
            FixtureId::Bn3 => include_str!("../fixtures/bn3.json"),
            FixtureId::Oil4 => include_str!("../fixtures/oil4.json"),
            FixtureId::Liquidity10 => include_str!("../fixtures/liquidity10.json"),
            FixtureId::Bankruptcy9 => include_str!("../fixtures/bankruptcy9.json"),
            FixtureId::BankruptcyBCh => include_str!("../fixtures/bankruptcy_b_ch.json"),
        }
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Fixture(s.to_owned(), "no such fixture".to_owned()))
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: FixtureId,
    pub network: BayesianNetwork,
    pub provenance: Provenance,
}

impl Fixture {
    pub fn is_complete(&self) -> bool {
        self.provenance.transcription_status == TranscriptionStatus::Complete
    }

    /// Expected marginals grouped per node in document order. States with
    /// no expectation are `None`.
    pub fn expected(&self) -> Vec<(NodeId, Vec<Option<f64>>)> {
        expected_by_node(&self.network, &self.provenance)
    }
}

/// Groups a provenance block's expectations by node, in document order.
pub fn expected_by_node(
    bn: &BayesianNetwork,
    provenance: &Provenance,
) -> Vec<(NodeId, Vec<Option<f64>>)> {
    bn.nodes()
        .iter()
        .filter_map(|node| {
            let mut probs = vec![None; node.num_states()];
            let mut any = false;
            for e in &provenance.expected_marginals {
                if e.node == node.id.as_str() {
                    if let Some(s) = node.state_index(&e.state) {
                        probs[s] = Some(e.p);
                        any = true;
                    }
                }
            }
            any.then(|| (node.id.clone(), probs))
        })
        .collect()
}

pub fn load_fixture(id: FixtureId) -> Result<Fixture> {
    let (network, provenance) =
        parse_document(id.document()).map_err(|e| Error::Fixture(id.to_string(), e.to_string()))?;
    let provenance = provenance
        .ok_or_else(|| Error::Fixture(id.to_string(), "missing provenance block".to_owned()))?;
    for e in &provenance.expected_marginals {
        let known = network
            .node(&e.node)
            .is_some_and(|n| n.state_index(&e.state).is_some());
        if !known {
            return Err(Error::Fixture(
                id.to_string(),
                format!("expectation for unknown {}={}", e.node, e.state),
            ));
        }
    }
    Ok(Fixture {
        id,
        network,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        for id in FixtureId::ALL {
            let f = load_fixture(id).unwrap();
            assert!(!f.provenance.expected_marginals.is_empty(), "{id}");
        }
    }

    #[test]
    fn names_round_trip() {
        for id in FixtureId::ALL {
            assert_eq!(id.name().parse::<FixtureId>().unwrap(), id);
        }
        assert!("oil5".parse::<FixtureId>().is_err());
    }

    #[test]
    fn status() {
        assert!(load_fixture(FixtureId::Oil4).unwrap().is_complete());
        assert!(load_fixture(FixtureId::BankruptcyBCh).unwrap().is_complete());
        assert!(!load_fixture(FixtureId::Liquidity10).unwrap().is_complete());
        assert!(!load_fixture(FixtureId::Bankruptcy9).unwrap().is_complete());
    }
}
