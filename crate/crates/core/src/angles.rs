//! Y-rotation angles that realize discrete distributions on qubit registers.
//!
//! A distribution over `n` states is padded to `2^m` entries with
//! `m = ceil(log2 n)` and split recursively: the first register qubit is
//! rotated to its marginal, then each half is decomposed conditioned on the
//! qubits above it. State `j` maps to the binary expansion of `j` with the
//! first register qubit as the most significant bit.

use crate::error::{Error, Result};
use crate::model::{NodeSpec, ROW_SUM_TOLERANCE};

/// `2·atan2(√p1, √p0)`, the RY angle taking `|0⟩` to amplitudes
/// proportional to `(√p0, √p1)`. The pair need not sum to one.
pub fn rotation_angle(p0: f64, p1: f64) -> Result<f64> {
    for p in [p0, p1] {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidProbability(p));
        }
    }
    if p0 + p1 <= 0.0 {
        return Err(Error::DegenerateBranch);
    }
    Ok(2.0 * p1.sqrt().atan2(p0.sqrt()))
}

/// Number of qubits needed for `n_states` basis states.
pub fn qubit_width(n_states: usize) -> Result<usize> {
    if n_states < 2 {
        return Err(Error::TooFewStates(n_states));
    }
    Ok((usize::BITS - (n_states - 1).leading_zeros()) as usize)
}

/// One angle per CPT row of a two-state node, in row order.
pub fn conditional_angles(node: &NodeSpec) -> Result<Vec<f64>> {
    if node.num_states() != 2 {
        return Err(Error::NotBinary {
            node: node.id.to_string(),
            states: node.num_states(),
        });
    }
    node.cpt
        .rows()
        .iter()
        .map(|row| rotation_angle(row[0], row[1]))
        .collect()
}

/// Complete binary tree of conditional RY angles.
///
/// `level(d)` holds `2^d` angles for register qubit `d`, indexed by the
/// values of qubits `0..d` read as a binary number (qubit 0 most
/// significant).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTree {
    levels: Vec<Vec<f64>>,
}

impl AngleTree {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, depth: usize) -> &[f64] {
        &self.levels[depth]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn angle(&self, depth: usize, path: usize) -> f64 {
        self.levels[depth][path]
    }

    /// Number of angles in the tree (`2^depth - 1`).
    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Basis-state probabilities obtained by multiplying the `cos²(θ/2)` or
    /// `sin²(θ/2)` factor of every angle along each root-to-leaf path.
    pub fn leaf_probabilities(&self) -> Vec<f64> {
        let m = self.depth();
        (0..1usize << m)
            .map(|leaf| {
                (0..m)
                    .map(|d| {
                        let path = leaf >> (m - d);
                        let bit = (leaf >> (m - d - 1)) & 1;
                        let half = self.levels[d][path] / 2.0;
                        if bit == 1 {
                            half.sin().powi(2)
                        } else {
                            half.cos().powi(2)
                        }
                    })
                    .product()
            })
            .collect()
    }
}

/// Decomposes a probability vector into an [`AngleTree`].
///
/// Subtrees whose total mass is zero get angle 0.
pub fn decompose_distribution(probs: &[f64]) -> Result<AngleTree> {
    let m = qubit_width(probs.len())?;
    for &p in probs {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(Error::NotNormalized(sum));
    }

    let mut padded = probs.to_vec();
    padded.resize(1 << m, 0.0);

    let levels = (0..m)
        .map(|d| {
            let span = 1usize << (m - d);
            (0..1usize << d)
                .map(|path| {
                    let block = &padded[path * span..(path + 1) * span];
                    let (low, high) = block.split_at(span / 2);
                    let p0: f64 = low.iter().sum();
                    let p1: f64 = high.iter().sum();
                    if p0 + p1 <= 0.0 {
                        0.0
                    } else {
                        rotation_angle(p0, p1).expect("non-negative pair with positive mass")
                    }
                })
                .collect()
        })
        .collect();
    Ok(AngleTree { levels })
}
