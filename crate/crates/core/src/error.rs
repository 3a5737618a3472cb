use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid network: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("cycle detected among nodes: {}", .0.join(", "))]
    Cycle(Vec<String>),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("joint enumeration needs {size} assignments, above the limit of {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("degenerate branch: both probabilities are zero")]
    DegenerateBranch,

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("probability vector sums to {0}, expected 1")]
    NotNormalized(f64),

    #[error("a node needs at least two states, got {0}")]
    TooFewStates(usize),

    #[error("node `{node}` has {states} states; expected exactly 2")]
    NotBinary { node: String, states: usize },

    #[error(transparent)]
    Circuit(#[from] CircuitError),

    #[error("circuit needs {required} qubits, above the limit of {limit}")]
    QubitLimit { required: usize, limit: usize },

    #[error("multi-controlled rotation with {controls} controls needs {needed} ancillas, {available} available")]
    InsufficientAncillas {
        controls: usize,
        needed: usize,
        available: usize,
    },

    #[error("circuit has no measurements")]
    NoMeasurements,

    #[error("at least {0} shots required")]
    NoShots(u64),

    #[error("at least 2 runs are needed for a standard deviation, got {0}")]
    TooFewRuns(usize),

    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("register mapping does not match the measured qubits: {0}")]
    MappingMismatch(String),

    #[error("invalid qubit selection: {0}")]
    InvalidSelection(String),

    #[error("fixture `{0}`: {1}")]
    Fixture(String, String),
}

/// Structural problems detected while building a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("{kind} expects {expected}, got {got}")]
    Arity {
        kind: &'static str,
        expected: &'static str,
        got: usize,
    },

    #[error("{kind} expects {expected} parameters, got {got}")]
    Params {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("qubit {index} out of range for a {size}-qubit register")]
    QubitOutOfRange { index: usize, size: usize },

    #[error("classical bit {index} out of range for a {size}-bit register")]
    ClbitOutOfRange { index: usize, size: usize },

    #[error("qubit {0} used more than once in one gate")]
    DuplicateQubit(usize),

    #[error("measurement on ancilla qubit {0}")]
    MeasureAncilla(usize),

    #[error("measurement gate without a classical bit")]
    MissingClbit,

    #[error("non-finite gate parameter")]
    NonFiniteParam,

    #[error("MCRY must be lowered before export (gate #{0})")]
    UnloweredMcry(usize),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
