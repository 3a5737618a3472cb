mod common;

use common::*;
use proptest::prelude::*;
use qbn_core::sim::StateVector;
use qbn_core::{compile, load_fixture, CompileOptions, FixtureId, LoweringLevel};

const LEVELS: [LoweringLevel; 3] = [
    LoweringLevel::Mcry,
    LoweringLevel::Elementary,
    LoweringLevel::Full,
];

#[test]
fn fixtures_match_oracle_at_every_level() {
    for id in FixtureId::ALL {
        let bn = load_fixture(id).unwrap().network;
        for level in LEVELS {
            let err = equivalence_error(&bn, level);
            assert!(err < 1e-9, "{id} at {level}: {err:e}");
        }
    }
}

#[test]
fn fixture_ancillas_return_to_zero() {
    for id in FixtureId::ALL {
        let bn = load_fixture(id).unwrap().network;
        for level in LEVELS {
            let mass = ancilla_mass(&bn, level);
            assert!(mass < 1e-10, "{id} at {level}: {mass:e}");
        }
    }
}

#[test]
fn norm_is_preserved_after_every_gate() {
    for id in FixtureId::ALL {
        let bn = load_fixture(id).unwrap().network;
        let circuit = compile(&bn, &CompileOptions::level(LoweringLevel::Full)).unwrap();
        let mut sv = StateVector::zero(circuit.num_qubits());
        for gate in circuit.gates() {
            sv.apply(gate);
            assert!((sv.norm_sqr() - 1.0).abs() < 1e-10, "{id}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn random_networks_match_oracle(bn in arb_network(5, 3, 3)) {
        for level in LEVELS {
            let err = equivalence_error(&bn, level);
            prop_assert!(err < 1e-9, "{} at {}", err, level);
            prop_assert!(ancilla_mass(&bn, level) < 1e-10);
        }
    }
}
