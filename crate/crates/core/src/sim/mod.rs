//! Dense statevector simulation.
//!
//! Every IR gate is a (possibly controlled) 2×2 unitary on one target qubit,
//! applied in place by pairing amplitudes whose indices differ only in the
//! target bit.

mod experiment;
mod sampling;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::compiler::DEFAULT_MAX_QUBITS;
use crate::error::{Error, Result};

pub use experiment::{
    check_coverage, run_experiment, t_critical, CoverageReport, CoverageRow, ExperimentConfig,
    NodeEstimate, RunReport, StateEstimate, GENERATOR,
};
pub use sampling::{
    exact_marginals, marginals, marginals_from_weights, sample, NodeMarginal, Sampler, ShotCounts,
};

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn ry_matrix(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// Phase rotation `diag(1, e^{iλ})`.
pub fn rz_matrix(lambda: f64) -> Matrix2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, lambda)]]
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [
            Complex64::new(c, 0.0),
            -Complex64::from_polar(s, lambda),
        ],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ]
}

pub fn x_matrix() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

/// The single-qubit unitary a gate applies to its target when every control
/// reads `|1⟩`. `None` for measurements.
pub fn gate_matrix(gate: &Gate) -> Option<Matrix2> {
    let p = gate.params();
    Some(match gate.kind() {
        GateKind::X | GateKind::Cx | GateKind::Ccx => x_matrix(),
        GateKind::Ry | GateKind::Cry | GateKind::Mcry => ry_matrix(p[0]),
        GateKind::Rz => rz_matrix(p[0]),
        GateKind::U3 => u3_matrix(p[0], p[1], p[2]),
        GateKind::Measure => return None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    /// Basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut sv = StateVector::zero(num_qubits);
        sv.amplitudes[0] = ZERO;
        sv.amplitudes[index] = ONE;
        sv
    }

    /// Panics unless the length is a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        assert!(amplitudes.len().is_power_of_two());
        StateVector {
            num_qubits: amplitudes.len().trailing_zeros() as usize,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Applies `matrix` to `target` on the subspace where all `controls` are
    /// set.
    pub fn apply_controlled(&mut self, matrix: &Matrix2, controls: &[usize], target: usize) {
        let tbit = 1usize << target;
        let cmask = controls.iter().fold(0usize, |m, &c| m | (1 << c));
        let [[m00, m01], [m10, m11]] = *matrix;
        for i in 0..self.amplitudes.len() {
            if i & tbit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tbit;
            let a = self.amplitudes[i];
            let b = self.amplitudes[j];
            self.amplitudes[i] = m00 * a + m01 * b;
            self.amplitudes[j] = m10 * a + m11 * b;
        }
    }

    /// Measurements are ignored.
    pub fn apply(&mut self, gate: &Gate) {
        if let Some(m) = gate_matrix(gate) {
            self.apply_controlled(&m, gate.controls(), gate.target());
        }
    }

    /// Born probabilities of every basis state.
    pub fn born(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }
}

/// Final state of `circuit` started from `|0…0⟩`.
pub fn statevector(circuit: &Circuit) -> Result<StateVector> {
    if circuit.num_qubits() > DEFAULT_MAX_QUBITS {
        return Err(Error::QubitLimit {
            required: circuit.num_qubits(),
            limit: DEFAULT_MAX_QUBITS,
        });
    }
    let mut sv = StateVector::zero(circuit.num_qubits());
    for gate in circuit.gates() {
        sv.apply(gate);
    }
    Ok(sv)
}

/// Distribution over the kept qubits, ancillas and other qubits summed out.
///
/// `keep[0]` is the most significant bit of each outcome index.
#[derive(Debug, Clone, PartialEq)]
pub struct KeptDistribution {
    qubits: Vec<usize>,
    probs: Vec<f64>,
}

impl KeptDistribution {
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, bits: &str) -> Option<f64> {
        if bits.len() != self.qubits.len() {
            return None;
        }
        usize::from_str_radix(bits, 2).ok().map(|i| self.probs[i])
    }

    /// `(bitstring, probability)` pairs in ascending outcome order.
    pub fn iter(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        let width = self.qubits.len();
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (bitstring(i, width), p))
    }
}

pub fn bitstring(value: usize, width: usize) -> String {
    if width == 0 {
        String::new()
    } else {
        format!("{value:0width$b}")
    }
}

/// Packs the bits of `index` at `qubits` (first = most significant).
pub(crate) fn pack(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> q) & 1))
}

pub fn probabilities(sv: &StateVector, keep: &[usize]) -> Result<KeptDistribution> {
    for (k, &q) in keep.iter().enumerate() {
        if q >= sv.num_qubits {
            return Err(Error::InvalidSelection(format!(
                "qubit {q} out of range for {} qubits",
                sv.num_qubits
            )));
        }
        if keep[..k].contains(&q) {
            return Err(Error::InvalidSelection(format!("qubit {q} listed twice")));
        }
    }
    let mut probs = vec![0.0; 1 << keep.len()];
    for (i, a) in sv.amplitudes.iter().enumerate() {
        probs[pack(i, keep)] += a.norm_sqr();
    }
    Ok(KeptDistribution {
        qubits: keep.to_vec(),
        probs,
    })
}
