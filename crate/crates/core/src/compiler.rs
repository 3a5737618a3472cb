//! Compositional compilation of a Bayesian network into a circuit.
//!
//! Nodes are emitted in topological order. Each node owns a register of
//! `ceil(log2 n)` qubits; for every parent configuration the compiler flips
//! the parent qubits that must read `|0⟩`, applies the node's angle tree as
//! (multi-)controlled RY rotations, and flips them back. Multi-controlled
//! rotations are then optionally lowered to elementary gates through a
//! Toffoli ladder over shared ancillas.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::angles::{decompose_distribution, qubit_width};
use crate::circuit::{budget, Circuit, Gate, GateKind, QubitBudget, QubitRole};
use crate::error::{Error, Result};
use crate::model::{config_digits, BayesianNetwork, NodeId, NodeSpec};

/// Dense statevector simulation bounds the default circuit size.
pub const DEFAULT_MAX_QUBITS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LoweringLevel {
    /// Keep multi-controlled rotations as single IR gates.
    Mcry,
    /// Lower to X, RY, CX and CCX.
    #[default]
    Elementary,
    /// Also decompose CCX into single-qubit gates and CX.
    Full,
}

impl std::str::FromStr for LoweringLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mcry" => Ok(LoweringLevel::Mcry),
            "elementary" => Ok(LoweringLevel::Elementary),
            "full" => Ok(LoweringLevel::Full),
            other => Err(format!("unknown lowering level `{other}`")),
        }
    }
}

impl std::fmt::Display for LoweringLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LoweringLevel::Mcry => "mcry",
            LoweringLevel::Elementary => "elementary",
            LoweringLevel::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub lowering_level: LoweringLevel,
    pub attach_measurements: bool,
    pub max_qubits: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            lowering_level: LoweringLevel::Elementary,
            attach_measurements: true,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl CompileOptions {
    pub fn level(lowering_level: LoweringLevel) -> Self {
        CompileOptions {
            lowering_level,
            ..Default::default()
        }
    }

    pub fn without_measurements(mut self) -> Self {
        self.attach_measurements = false;
        self
    }
}

/// Qubits of one node, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeRegister {
    pub node: NodeId,
    pub states: Vec<String>,
    pub qubits: Vec<usize>,
}

/// Node-to-qubit assignment.
///
/// Ancillas take the lowest indices. Node registers are stacked downwards
/// from the top qubit in topological order, so parents always sit above
/// their children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegisterMap {
    registers: Vec<NodeRegister>,
    ancillas: Vec<usize>,
    num_qubits: usize,
}

impl RegisterMap {
    pub fn for_network(bn: &BayesianNetwork) -> Result<Self> {
        let QubitBudget {
            ancilla_qubits,
            total,
            ..
        } = budget(bn);
        let mut next = total;
        let mut registers = Vec::with_capacity(bn.len());
        for i in bn.topological_indices()? {
            let node = &bn.nodes()[i];
            let width = qubit_width(node.num_states())?;
            let qubits = (next - width..next).rev().collect();
            next -= width;
            registers.push(NodeRegister {
                node: node.id.clone(),
                states: node.states.clone(),
                qubits,
            });
        }
        debug_assert_eq!(next, ancilla_qubits);
        Ok(RegisterMap {
            registers,
            ancillas: (0..ancilla_qubits).collect(),
            num_qubits: total,
        })
    }

    /// Registers in topological order.
    pub fn registers(&self) -> &[NodeRegister] {
        &self.registers
    }

    pub fn register(&self, node: &str) -> Option<&NodeRegister> {
        self.registers.iter().find(|r| r.node.as_str() == node)
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// All node qubits, highest index first.
    pub fn node_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self
            .registers
            .iter()
            .flat_map(|r| r.qubits.iter().copied())
            .collect();
        qs.sort_unstable_by(|a, b| b.cmp(a));
        qs
    }

    pub fn labels(&self) -> Vec<QubitRole> {
        let mut labels = vec![QubitRole::Ancilla; self.num_qubits];
        for reg in &self.registers {
            for (bit, &q) in reg.qubits.iter().enumerate() {
                labels[q] = QubitRole::Node {
                    node: reg.node.clone(),
                    bit,
                };
            }
        }
        labels
    }
}

/// Compiles a network into a circuit at the requested lowering level.
pub fn compile(bn: &BayesianNetwork, opts: &CompileOptions) -> Result<Circuit> {
    let violations = bn.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let qubits = budget(bn);
    if qubits.total > opts.max_qubits {
        return Err(Error::QubitLimit {
            required: qubits.total,
            limit: opts.max_qubits,
        });
    }
    let map = RegisterMap::for_network(bn)?;
    let num_clbits = if opts.attach_measurements {
        qubits.node_qubits
    } else {
        0
    };
    let mut circuit = Circuit::with_labels(map.labels(), num_clbits);
    for i in bn.topological_indices()? {
        circuit.extend(encode_child_block(&bn.nodes()[i], &map)?)?;
    }

    let mut circuit = lower_circuit(&circuit, opts.lowering_level)?;
    if opts.attach_measurements {
        let mut node_qubits = map.node_qubits();
        node_qubits.reverse();
        for (clbit, q) in node_qubits.into_iter().enumerate() {
            circuit.append(Gate::measure(q, clbit))?;
        }
    }
    Ok(circuit)
}

/// Gates realizing one node's conditional table, at MCRY level.
///
/// Works for root nodes too: they have a single, unconditioned
/// configuration. Within a configuration, angle-tree level `d` becomes one
/// rotation per path, controlled by every parent qubit plus the node's own
/// qubits `0..d`.
pub fn encode_child_block(node: &NodeSpec, map: &RegisterMap) -> Result<Vec<Gate>> {
    let own = map
        .register(node.id.as_str())
        .ok_or_else(|| Error::UnknownNode(node.id.to_string()))?;
    let parents: Vec<&NodeRegister> = node
        .parents
        .iter()
        .map(|p| {
            map.register(p.as_str())
                .ok_or_else(|| Error::UnknownNode(p.to_string()))
        })
        .collect::<Result<_>>()?;
    let radices: Vec<usize> = parents.iter().map(|r| r.states.len()).collect();
    let parent_qubits: Vec<usize> = parents
        .iter()
        .flat_map(|r| r.qubits.iter().copied())
        .collect();

    let mut gates = Vec::new();
    for (config, row) in node.cpt.rows().iter().enumerate() {
        let tree = decompose_distribution(row)?;
        let digits = config_digits(config, &radices);
        let flips: Vec<usize> = parents
            .iter()
            .zip(&digits)
            .flat_map(|(reg, &state)| zero_bits(&reg.qubits, state))
            .collect();

        gates.extend(flips.iter().map(|&q| Gate::x(q)));
        for (depth, level) in tree.levels().iter().enumerate() {
            let ancestors = &own.qubits[..depth];
            for (path, &theta) in level.iter().enumerate() {
                let inner = zero_bits(ancestors, path);
                let controls: Vec<usize> =
                    parent_qubits.iter().chain(ancestors).copied().collect();
                gates.extend(inner.iter().map(|&q| Gate::x(q)));
                gates.push(Gate::controlled_ry(theta, controls, own.qubits[depth]));
                gates.extend(inner.iter().map(|&q| Gate::x(q)));
            }
        }
        gates.extend(flips.iter().map(|&q| Gate::x(q)));
    }
    Ok(gates)
}

/// Qubits of `register` that read 0 when it holds `value` (first qubit most
/// significant).
fn zero_bits(register: &[usize], value: usize) -> Vec<usize> {
    let width = register.len();
    register
        .iter()
        .enumerate()
        .filter(|(k, _)| (value >> (width - 1 - k)) & 1 == 0)
        .map(|(_, &q)| q)
        .collect()
}

/// Toffoli-ladder decomposition of a rotation with `n` controls into
/// `2(n-1)` CCX and one CRY, using the first `n-1` ancillas (which must start
/// and end in `|0⟩`). A single control passes through as a CRY.
pub fn lower_mcry(
    theta: f64,
    controls: &[usize],
    target: usize,
    ancillas: &[usize],
) -> Result<Vec<Gate>> {
    let n = controls.len();
    match n {
        0 => return Ok(vec![Gate::ry(theta, target)]),
        1 => return Ok(vec![Gate::cry(theta, controls[0], target)]),
        _ => {}
    }
    if ancillas.len() < n - 1 {
        return Err(Error::InsufficientAncillas {
            controls: n,
            needed: n - 1,
            available: ancillas.len(),
        });
    }
    let work = &ancillas[..n - 1];
    let mut ladder = Vec::with_capacity(n - 1);
    ladder.push(Gate::ccx(controls[0], controls[1], work[0]));
    for k in 2..n {
        ladder.push(Gate::ccx(controls[k], work[k - 2], work[k - 1]));
    }

    let mut gates = ladder.clone();
    gates.push(Gate::cry(theta, work[n - 2], target));
    gates.extend(ladder.into_iter().rev());
    Ok(gates)
}

/// `CRY(θ) = CX · RY(-θ/2) · CX · RY(θ/2)` on the target.
pub fn lower_cry(theta: f64, control: usize, target: usize) -> Vec<Gate> {
    vec![
        Gate::ry(theta / 2.0, target),
        Gate::cx(control, target),
        Gate::ry(-theta / 2.0, target),
        Gate::cx(control, target),
    ]
}

/// Six-CNOT Toffoli with nine single-qubit gates (H as `U3(π/2, 0, π)`,
/// T and T† as `RZ(±π/4)`).
pub fn lower_ccx(c0: usize, c1: usize, target: usize) -> Vec<Gate> {
    let h = |q| Gate::u3(FRAC_PI_2, 0.0, PI, q);
    let t = |q| Gate::rz(FRAC_PI_4, q);
    let tdg = |q| Gate::rz(-FRAC_PI_4, q);
    vec![
        h(target),
        Gate::cx(c1, target),
        tdg(target),
        Gate::cx(c0, target),
        t(target),
        Gate::cx(c1, target),
        tdg(target),
        Gate::cx(c0, target),
        t(c1),
        t(target),
        h(target),
        Gate::cx(c0, c1),
        t(c0),
        tdg(c1),
        Gate::cx(c0, c1),
    ]
}

/// Lowers every gate of `circuit` down to `level`. Ancillas are the qubits
/// labelled as such.
pub fn lower_circuit(circuit: &Circuit, level: LoweringLevel) -> Result<Circuit> {
    let ancillas = circuit.ancillas();
    let mut out = Circuit::with_labels(circuit.labels().to_vec(), circuit.num_clbits());
    for gate in circuit.gates() {
        out.extend(lower_gate(gate, level, &ancillas)?)?;
    }
    Ok(out)
}

fn lower_gate(gate: &Gate, level: LoweringLevel, ancillas: &[usize]) -> Result<Vec<Gate>> {
    if level == LoweringLevel::Mcry {
        return Ok(vec![gate.clone()]);
    }
    let step = match gate.kind() {
        GateKind::Mcry => {
            let free: Vec<usize> = ancillas
                .iter()
                .copied()
                .filter(|a| !gate.qubits().any(|q| q == *a))
                .collect();
            lower_mcry(gate.params()[0], gate.controls(), gate.target(), &free)?
        }
        _ => vec![gate.clone()],
    };
    let mut out = Vec::with_capacity(step.len() * 4);
    for g in step {
        match g.kind() {
            GateKind::Cry => out.extend(lower_cry(g.params()[0], g.controls()[0], g.target())),
            _ => out.push(g),
        }
    }
    if level == LoweringLevel::Full {
        out = out
            .into_iter()
            .flat_map(|g| match g.kind() {
                GateKind::Ccx => lower_ccx(g.controls()[0], g.controls()[1], g.target()),
                _ => vec![g],
            })
            .collect();
    }
    Ok(out)
}
