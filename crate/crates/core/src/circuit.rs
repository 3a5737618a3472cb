//! Gate-level circuit IR, qubit budgeting and QASM export.
//!
//! Qubit 0 is the least significant bit of a basis index; bitstrings are
//! written with the highest qubit index leftmost.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::angles::qubit_width;
use crate::error::{CircuitError, Error, Result};
use crate::model::{BayesianNetwork, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GateKind {
    X,
    Ry,
    Rz,
    U3,
    Cx,
    Ccx,
    Cry,
    Mcry,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Ccx,
        GateKind::Cry,
        GateKind::Mcry,
        GateKind::Measure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Ccx => "ccx",
            GateKind::Cry => "cry",
            GateKind::Mcry => "mcry",
            GateKind::Measure => "measure",
        }
    }

    fn param_count(self) -> usize {
        match self {
            GateKind::Ry | GateKind::Rz | GateKind::Cry | GateKind::Mcry => 1,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    fn check_controls(self, n: usize) -> std::result::Result<(), CircuitError> {
        let (ok, expected) = match self {
            GateKind::X | GateKind::Ry | GateKind::Rz | GateKind::U3 | GateKind::Measure => {
                (n == 0, "0 controls")
            }
            GateKind::Cx | GateKind::Cry => (n == 1, "1 control"),
            GateKind::Ccx => (n == 2, "2 controls"),
            GateKind::Mcry => (n >= 1, "at least 1 control"),
        };
        if ok {
            Ok(())
        } else {
            Err(CircuitError::Arity {
                kind: self.name(),
                expected,
                got: n,
            })
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    params: Vec<f64>,
    controls: Vec<usize>,
    target: usize,
    clbit: Option<usize>,
}

impl Gate {
    /// Unchecked constructor; [`Circuit::append`] validates.
    pub fn new(
        kind: GateKind,
        params: Vec<f64>,
        controls: Vec<usize>,
        target: usize,
        clbit: Option<usize>,
    ) -> Self {
        Gate {
            kind,
            params,
            controls,
            target,
            clbit,
        }
    }

    pub fn x(target: usize) -> Self {
        Gate::new(GateKind::X, vec![], vec![], target, None)
    }

    pub fn ry(theta: f64, target: usize) -> Self {
        Gate::new(GateKind::Ry, vec![theta], vec![], target, None)
    }

    pub fn rz(lambda: f64, target: usize) -> Self {
        Gate::new(GateKind::Rz, vec![lambda], vec![], target, None)
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, target: usize) -> Self {
        Gate::new(GateKind::U3, vec![theta, phi, lambda], vec![], target, None)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cx, vec![], vec![control], target, None)
    }

    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::new(GateKind::Ccx, vec![], vec![c0, c1], target, None)
    }

    pub fn cry(theta: f64, control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cry, vec![theta], vec![control], target, None)
    }

    pub fn mcry(theta: f64, controls: Vec<usize>, target: usize) -> Self {
        Gate::new(GateKind::Mcry, vec![theta], controls, target, None)
    }

    /// Controlled RY in the narrowest form: RY, CRY or MCRY.
    pub fn controlled_ry(theta: f64, controls: Vec<usize>, target: usize) -> Self {
        match controls.len() {
            0 => Gate::ry(theta, target),
            1 => Gate::cry(theta, controls[0], target),
            _ => Gate::mcry(theta, controls, target),
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Gate::new(GateKind::Measure, vec![], vec![], qubit, Some(clbit))
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn clbit(&self) -> Option<usize> {
        self.clbit
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }

    /// Checks arity, parameter count and that indices are distinct.
    pub fn check_shape(&self) -> std::result::Result<(), CircuitError> {
        self.kind.check_controls(self.controls.len())?;
        if self.params.len() != self.kind.param_count() {
            return Err(CircuitError::Params {
                kind: self.kind.name(),
                expected: self.kind.param_count(),
                got: self.params.len(),
            });
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(CircuitError::NonFiniteParam);
        }
        let mut seen = Vec::with_capacity(self.controls.len() + 1);
        for q in self.qubits() {
            if seen.contains(&q) {
                return Err(CircuitError::DuplicateQubit(q));
            }
            seen.push(q);
        }
        match (self.kind, self.clbit) {
            (GateKind::Measure, None) => Err(CircuitError::MissingClbit),
            _ => Ok(()),
        }
    }
}

/// What a qubit is used for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QubitRole {
    /// Bit `bit` of a node's register, 0 being the most significant.
    Node { node: NodeId, bit: usize },
    Ancilla,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    gates: Vec<Gate>,
    labels: Vec<QubitRole>,
}

impl Circuit {
    /// Circuit whose qubits are all ancillas until relabelled.
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            gates: Vec::new(),
            labels: vec![QubitRole::Ancilla; num_qubits],
        }
    }

    pub fn with_labels(labels: Vec<QubitRole>, num_clbits: usize) -> Self {
        Circuit {
            num_qubits: labels.len(),
            num_clbits,
            gates: Vec::new(),
            labels,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn labels(&self) -> &[QubitRole] {
        &self.labels
    }

    pub fn set_label(&mut self, qubit: usize, role: QubitRole) {
        self.labels[qubit] = role;
    }

    pub fn is_ancilla(&self, qubit: usize) -> bool {
        matches!(self.labels.get(qubit), Some(QubitRole::Ancilla))
    }

    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.is_ancilla(q)).collect()
    }

    /// Validates one gate against this circuit.
    pub fn check_gate(&self, gate: &Gate) -> std::result::Result<(), CircuitError> {
        gate.check_shape()?;
        for q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    index: q,
                    size: self.num_qubits,
                });
            }
        }
        if gate.kind == GateKind::Measure {
            let c = gate.clbit.expect("checked by shape");
            if c >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange {
                    index: c,
                    size: self.num_clbits,
                });
            }
            if self.is_ancilla(gate.target) {
                return Err(CircuitError::MeasureAncilla(gate.target));
            }
        }
        Ok(())
    }

    pub fn append(&mut self, gate: Gate) -> std::result::Result<(), CircuitError> {
        self.check_gate(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(
        &mut self,
        gates: impl IntoIterator<Item = Gate>,
    ) -> std::result::Result<(), CircuitError> {
        gates.into_iter().try_for_each(|g| self.append(g))
    }

    /// Re-checks every gate.
    pub fn validate(&self) -> std::result::Result<(), CircuitError> {
        self.gates.iter().try_for_each(|g| self.check_gate(g))
    }

    /// Measured qubits with their classical bits, in gate order.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .map(|g| (g.target, g.clbit.unwrap_or_default()))
            .collect()
    }

    pub fn census(&self) -> GateCensus {
        gate_census(self)
    }

    /// Same circuit without measurement gates.
    pub fn without_measurements(&self) -> Circuit {
        let mut out = self.clone();
        out.gates.retain(|g| g.kind != GateKind::Measure);
        out
    }
}

/// Gate counts per kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateCensus(BTreeMap<GateKind, usize>);

impl GateCensus {
    pub fn count(&self, kind: GateKind) -> usize {
        self.0.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.0.iter().map(|(&k, &n)| (k, n))
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }
}

impl fmt::Display for GateCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, n)| format!("{k}: {n}")).collect();
        f.write_str(&parts.join(", "))
    }
}

pub fn gate_census(circuit: &Circuit) -> GateCensus {
    census_of(circuit.gates())
}

pub fn census_of(gates: &[Gate]) -> GateCensus {
    let mut map = BTreeMap::new();
    for g in gates {
        *map.entry(g.kind).or_insert(0) += 1;
    }
    GateCensus(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitBudget {
    pub node_qubits: usize,
    pub ancilla_qubits: usize,
    pub total: usize,
}

/// Qubits needed to compile `bn`.
///
/// The deepest rotation of node `i` is controlled by every parent register
/// qubit and all but the last qubit of its own register, so it has
/// `m_parents + m_i - 1` controls and needs one ancilla fewer than that.
/// Ancillas are shared across nodes.
pub fn budget(bn: &BayesianNetwork) -> QubitBudget {
    let width = |states: usize| qubit_width(states).unwrap_or(0);
    let node_qubits = bn.nodes().iter().map(|n| width(n.num_states())).sum();
    let ancilla_qubits = (0..bn.len())
        .map(|i| {
            let parent_width: usize = bn
                .parent_indices(i)
                .into_iter()
                .map(|p| width(bn.nodes()[p].num_states()))
                .sum();
            let controls = parent_width + width(bn.nodes()[i].num_states()) - 1;
            controls.saturating_sub(1)
        })
        .max()
        .unwrap_or(0);
    QubitBudget {
        node_qubits,
        ancilla_qubits,
        total: node_qubits + ancilla_qubits,
    }
}

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros dropped.
pub fn format_angle(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-5..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    trim_zeros(&fixed).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// OpenQASM 2.0 text for a circuit whose MCRY gates have been lowered.
pub fn to_qasm(circuit: &Circuit) -> Result<String> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits);
    if circuit.num_clbits > 0 {
        let _ = writeln!(out, "creg c[{}];", circuit.num_clbits);
    }
    for (i, g) in circuit.gates.iter().enumerate() {
        let params = || {
            g.params
                .iter()
                .map(|&p| format_angle(p))
                .collect::<Vec<_>>()
                .join(",")
        };
        let qubits = g
            .qubits()
            .map(|q| format!("q[{q}]"))
            .collect::<Vec<_>>()
            .join(",");
        let _ = match g.kind {
            GateKind::Mcry => return Err(Error::Circuit(CircuitError::UnloweredMcry(i))),
            GateKind::Measure => writeln!(
                out,
                "measure q[{}] -> c[{}];",
                g.target,
                g.clbit.unwrap_or_default()
            ),
            GateKind::X | GateKind::Cx | GateKind::Ccx => writeln!(out, "{} {qubits};", g.kind),
            _ => writeln!(out, "{}({}) {qubits};", g.kind, params()),
        };
    }
    Ok(out)
}
