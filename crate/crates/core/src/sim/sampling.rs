use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{bitstring, pack, probabilities, statevector};
use crate::circuit::Circuit;
use crate::compiler::RegisterMap;
use crate::error::{Error, Result};
use crate::model::NodeId;

/// Measurement outcomes over the measured qubits, highest index leftmost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    qubits: Vec<usize>,
    dense: Vec<u64>,
    total_shots: u64,
}

impl ShotCounts {
    /// Measured qubits, most significant first.
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn get(&self, bits: &str) -> u64 {
        if bits.len() != self.qubits.len() {
            return 0;
        }
        usize::from_str_radix(bits, 2)
            .ok()
            .and_then(|i| self.dense.get(i).copied())
            .unwrap_or(0)
    }

    /// Non-zero counts keyed by bitstring.
    pub fn counts(&self) -> BTreeMap<String, u64> {
        let width = self.qubits.len();
        self.dense
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (bitstring(i, width), n))
            .collect()
    }

    /// `n_s / N` for every outcome, indexed by packed outcome.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total_shots as f64;
        self.dense.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Inverse-CDF sampler over the Born distribution of a circuit's measured
/// qubits. Built once per circuit and reused across runs.
#[derive(Debug, Clone)]
pub struct Sampler {
    qubits: Vec<usize>,
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(circuit: &Circuit) -> Result<Self> {
        let mut qubits: Vec<usize> = circuit.measurements().into_iter().map(|(q, _)| q).collect();
        if qubits.is_empty() {
            return Err(Error::NoMeasurements);
        }
        qubits.sort_unstable_by(|a, b| b.cmp(a));
        qubits.dedup();
        let sv = statevector(circuit)?;
        let dist = probabilities(&sv, &qubits)?;
        let mut acc = 0.0;
        let cdf = dist
            .probs()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Sampler { qubits, cdf })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Draws `shots` outcomes with a ChaCha8 stream seeded from `seed`.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<ShotCounts> {
        if shots == 0 {
            return Err(Error::NoShots(1));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = *self.cdf.last().expect("non-empty");
        let mut dense = vec![0u64; self.cdf.len()];
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let k = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
            dense[k] += 1;
        }
        Ok(ShotCounts {
            qubits: self.qubits.clone(),
            dense,
            total_shots: shots,
        })
    }
}

/// Samples the measured qubits of `circuit`.
pub fn sample(circuit: &Circuit, shots: u64, seed: u64) -> Result<ShotCounts> {
    Sampler::new(circuit)?.sample(shots, seed)
}

/// Per-node distribution decoded from register bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeMarginal {
    pub node: NodeId,
    pub states: Vec<String>,
    pub probs: Vec<f64>,
    /// Mass on register values past the last state; zero for a correct
    /// circuit.
    pub padding: f64,
}

/// Node marginals from sampled counts.
pub fn marginals(counts: &ShotCounts, map: &RegisterMap) -> Result<Vec<NodeMarginal>> {
    marginals_from_weights(&counts.qubits, &counts.frequencies(), map)
}

/// Node marginals from any weighting of outcomes over `qubits` (first =
/// most significant).
pub fn marginals_from_weights(
    qubits: &[usize],
    weights: &[f64],
    map: &RegisterMap,
) -> Result<Vec<NodeMarginal>> {
    if weights.len() != 1 << qubits.len() {
        return Err(Error::MappingMismatch(format!(
            "{} weights for {} qubits",
            weights.len(),
            qubits.len()
        )));
    }
    map.registers()
        .iter()
        .map(|reg| {
            let positions: Vec<usize> = reg
                .qubits
                .iter()
                .map(|q| {
                    qubits
                        .iter()
                        .position(|m| m == q)
                        .map(|p| qubits.len() - 1 - p)
                        .ok_or_else(|| {
                            Error::MappingMismatch(format!(
                                "qubit {q} of node `{}` is not measured",
                                reg.node
                            ))
                        })
                })
                .collect::<Result<_>>()?;
            let mut probs = vec![0.0; reg.states.len()];
            let mut padding = 0.0;
            for (outcome, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let value = pack(outcome, &positions);
                match probs.get_mut(value) {
                    Some(slot) => *slot += w,
                    None => padding += w,
                }
            }
            Ok(NodeMarginal {
                node: reg.node.clone(),
                states: reg.states.clone(),
                probs,
                padding,
            })
        })
        .collect()
}

/// Node marginals read off the exact final state.
pub fn exact_marginals(circuit: &Circuit, map: &RegisterMap) -> Result<Vec<NodeMarginal>> {
    let qubits = map.node_qubits();
    let sv = statevector(&circuit.without_measurements())?;
    let dist = probabilities(&sv, &qubits)?;
    marginals_from_weights(&qubits, dist.probs(), map)
}
