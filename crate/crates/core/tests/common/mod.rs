#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qbn_core::{
    compile, joint_distribution, probabilities, statevector, BayesianNetwork, CompileOptions,
    Gate, GateKind, LoweringLevel, NodeSpec, RegisterMap,
};

pub type C = Complex64;
pub type Dense = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn dagger(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn ry(theta: f64) -> Dense {
    let (s, co) = (theta / 2.0).sin_cos();
    vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]]
}

pub fn x() -> Dense {
    vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn phase(lambda: f64) -> Dense {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), C::from_polar(1.0, lambda)]]
}

pub fn u3(theta: f64, phi: f64, lambda: f64) -> Dense {
    // U3 = RZ(φ)·RY(θ)·RZ(λ) with the phase-gate convention
    matmul(&phase(phi), &matmul(&ry(theta), &phase(lambda)))
}

fn p1() -> Dense {
    vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]
}

/// Tensor product of one 2×2 per qubit, qubit `n-1` leftmost.
fn tensor(n: usize, pick: impl Fn(usize) -> Dense) -> Dense {
    (0..n).rev().fold(identity(1), |acc, q| kron(&acc, &pick(q)))
}

/// `I − P + P·U_t` with `P` projecting every control onto `|1⟩`.
pub fn controlled(n: usize, controls: &[usize], target: usize, u: &Dense) -> Dense {
    let proj = tensor(n, |q| if controls.contains(&q) { p1() } else { identity(2) });
    let on = tensor(n, |q| {
        if controls.contains(&q) {
            p1()
        } else if q == target {
            u.clone()
        } else {
            identity(2)
        }
    });
    add(&sub(&identity(1 << n), &proj), &on)
}

pub fn gate_unitary(n: usize, gate: &Gate) -> Dense {
    let p = gate.params();
    let u = match gate.kind() {
        GateKind::X | GateKind::Cx | GateKind::Ccx => x(),
        GateKind::Ry | GateKind::Cry | GateKind::Mcry => ry(p[0]),
        GateKind::Rz => phase(p[0]),
        GateKind::U3 => u3(p[0], p[1], p[2]),
        GateKind::Measure => return identity(1 << n),
    };
    controlled(n, gate.controls(), gate.target(), &u)
}

pub fn sequence_unitary(n: usize, gates: &[Gate]) -> Dense {
    gates
        .iter()
        .fold(identity(1 << n), |acc, g| matmul(&gate_unitary(n, g), &acc))
}

/// Joint oracle probabilities laid out over node-register outcomes (all node
/// qubits, highest index first), padding values at zero.
pub fn oracle_over_registers(bn: &BayesianNetwork, map: &RegisterMap) -> Vec<f64> {
    let joint = joint_distribution(bn).unwrap();
    let qubits = map.node_qubits();
    let mut out = vec![0.0; 1 << qubits.len()];
    for (assignment, p) in joint.iter() {
        let mut index = 0usize;
        for (reg, &value) in map.registers().iter().zip(&assignment) {
            let width = reg.qubits.len();
            for (k, q) in reg.qubits.iter().enumerate() {
                let bit = (value >> (width - 1 - k)) & 1;
                let pos = qubits.len() - 1 - qubits.iter().position(|m| m == q).unwrap();
                index |= bit << pos;
            }
        }
        out[index] += p;
    }
    out
}

/// Largest deviation between the compiled circuit's node-register
/// distribution and the oracle.
pub fn equivalence_error(bn: &BayesianNetwork, level: LoweringLevel) -> f64 {
    let circuit = compile(bn, &CompileOptions::level(level).without_measurements()).unwrap();
    let map = RegisterMap::for_network(bn).unwrap();
    let sv = statevector(&circuit).unwrap();
    let got = probabilities(&sv, &map.node_qubits()).unwrap();
    let want = oracle_over_registers(bn, &map);
    got.probs()
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Probability mass with at least one ancilla set.
pub fn ancilla_mass(bn: &BayesianNetwork, level: LoweringLevel) -> f64 {
    let circuit = compile(bn, &CompileOptions::level(level).without_measurements()).unwrap();
    let map = RegisterMap::for_network(bn).unwrap();
    let mask = map.ancillas().iter().fold(0usize, |m, &a| m | (1 << a));
    statevector(&circuit)
        .unwrap()
        .born()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask != 0)
        .map(|(_, p)| p)
        .sum()
}

fn row(states: usize) -> impl Strategy<Value = Vec<f64>> {
    // weights of 0 appear often to exercise zero-mass branches
    prop::collection::vec(prop_oneof![1 => Just(0u32), 4 => 1u32..100], states)
        .prop_filter("row needs some mass", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| {
            let total: u32 = w.iter().sum();
            w.iter().map(|&x| x as f64 / total as f64).collect()
        })
}

/// Random valid network: up to `max_nodes` nodes with 2..=`max_states`
/// states and at most `max_parents` earlier nodes as parents.
pub fn arb_network(
    max_nodes: usize,
    max_states: usize,
    max_parents: usize,
) -> impl Strategy<Value = BayesianNetwork> {
    (1..=max_nodes)
        .prop_flat_map(move |n| {
            (0..n)
                .map(|i| {
                    (
                        2..=max_states,
                        prop::sample::subsequence((0..i).collect::<Vec<_>>(), 0..=i.min(max_parents)),
                    )
                })
                .collect::<Vec<_>>()
        })
        .prop_flat_map(|shapes: Vec<(usize, Vec<usize>)>| {
            let tables = shapes
                .iter()
                .map(|(states, parents)| {
                    let rows: usize = parents.iter().map(|&p| shapes[p].0).product();
                    prop::collection::vec(row(*states), rows)
                })
                .collect::<Vec<_>>();
            (Just(shapes), tables)
        })
        .prop_map(|(shapes, tables)| {
            let names: Vec<String> = (0..shapes.len()).map(|i| format!("V{i}")).collect();
            let labels = ["s0", "s1", "s2", "s3"];
            let nodes = shapes
                .iter()
                .zip(tables)
                .enumerate()
                .map(|(i, ((states, parents), rows))| {
                    let parent_names: Vec<&str> = parents.iter().map(|&p| names[p].as_str()).collect();
                    NodeSpec::new(&names[i], &labels[..*states], &parent_names, rows)
                })
                .collect();
            BayesianNetwork::new(nodes).unwrap()
        })
}
