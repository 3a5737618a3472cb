//! Compiles discrete Bayesian networks into gate-level quantum circuits and
//! checks them against exact enumeration.
//!
//! Pipeline: [`parse_network`] → [`compile`] → [`statevector`] or
//! [`sample`] → [`marginals`] / [`run_experiment`], with [`joint_distribution`]
//! as the classical reference.

pub mod angles;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod oracle;
pub mod sim;

pub use angles::{
    conditional_angles, decompose_distribution, qubit_width, rotation_angle, AngleTree,
};
pub use circuit::{
    budget, census_of, format_angle, gate_census, to_qasm, Circuit, Gate, GateCensus, GateKind,
    QubitBudget, QubitRole,
};
pub use compiler::{
    compile, encode_child_block, lower_ccx, lower_circuit, lower_cry, lower_mcry, CompileOptions,
    LoweringLevel, NodeRegister, RegisterMap, DEFAULT_MAX_QUBITS,
};
pub use error::{CircuitError, Error, Result};
pub use fixtures::{load_fixture, Fixture, FixtureId, Provenance, TranscriptionStatus};
pub use model::{
    emit_document, emit_network, parse_document, parse_network, topological_order, validate,
    BayesianNetwork, ConditionalTable, NodeId, NodeSpec, Violation,
};
pub use oracle::{exact_marginal, exact_marginals, joint_distribution, JointDistribution};
pub use sim::{
    check_coverage, marginals, probabilities, run_experiment, sample, statevector,
    ExperimentConfig, NodeMarginal, RunReport, ShotCounts, StateVector,
};
