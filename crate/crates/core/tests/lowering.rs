mod common;

use common::*;
use proptest::prelude::*;
use qbn_core::{lower_ccx, lower_cry, lower_mcry, sim, Gate, GateKind};

#[test]
fn lower_cry_matches_controlled_ry() {
    for theta in [0.0, 0.3, 1.0, std::f64::consts::FRAC_PI_2, 2.5, std::f64::consts::PI, -1.2] {
        for (ctl, tgt) in [(0, 1), (1, 0)] {
            let want = controlled(2, &[ctl], tgt, &ry(theta));
            let got = sequence_unitary(2, &lower_cry(theta, ctl, tgt));
            assert!(max_abs_diff(&want, &got) < 1e-12, "θ={theta}");
        }
    }
}

#[test]
fn lower_ccx_matches_toffoli() {
    for (a, b, t) in [(0, 1, 2), (2, 1, 0), (1, 2, 0), (0, 2, 1)] {
        let want = controlled(3, &[a, b], t, &x());
        let got = sequence_unitary(3, &lower_ccx(a, b, t));
        assert!(max_abs_diff(&want, &got) < 1e-12, "{a},{b}->{t}");
    }
}

#[test]
fn lower_ccx_gate_mix() {
    let gates = lower_ccx(0, 1, 2);
    let cx = gates.iter().filter(|g| g.kind() == GateKind::Cx).count();
    assert_eq!(cx, 6);
    assert_eq!(gates.len() - cx, 9);
}

/// On inputs with every ancilla in `|0⟩`, the ladder acts as the
/// multi-controlled rotation and returns the ancillas to `|0⟩`.
fn check_mcry(n_controls: usize, theta: f64) {
    let ancillas: Vec<usize> = (0..n_controls - 1).collect();
    let target = n_controls - 1;
    let controls: Vec<usize> = (n_controls..2 * n_controls).rev().collect();
    let n = 2 * n_controls;
    let gates = lower_mcry(theta, &controls, target, &ancillas).unwrap();
    let got = sequence_unitary(n, &gates);
    let want = controlled(n, &controls, target, &ry(theta));
    let mask: usize = ancillas.iter().map(|a| 1 << a).sum();
    for col in (0..1 << n).filter(|j| j & mask == 0) {
        for row in 0..1 << n {
            assert!((got[row][col] - want[row][col]).norm() < 1e-12, "n={n_controls} {row},{col}");
        }
    }
}

#[test]
fn lower_mcry_ladder_matches_dense_oracle() {
    for n in 2..=4 {
        check_mcry(n, 1.234);
        check_mcry(n, std::f64::consts::PI);
    }
}

#[test]
fn lower_mcry_needs_ancillas() {
    assert!(lower_mcry(1.0, &[3, 4, 5], 2, &[0]).is_err());
    assert_eq!(lower_mcry(1.0, &[1], 0, &[]).unwrap(), vec![Gate::cry(1.0, 1, 0)]);
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let angle = -7.0..7.0f64;
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(Gate::x),
        (angle.clone(), q.clone()).prop_map(|(t, q)| Gate::ry(t, q)),
        (angle.clone(), q.clone()).prop_map(|(t, q)| Gate::rz(t, q)),
        (angle.clone(), angle.clone(), angle.clone(), q.clone())
            .prop_map(|(a, b, l, q)| Gate::u3(a, b, l, q)),
        prop::sample::subsequence((0..n).collect::<Vec<_>>(), 2)
            .prop_map(|v| Gate::cx(v[0], v[1])),
        prop::sample::subsequence((0..n).collect::<Vec<_>>(), 3)
            .prop_map(|v| Gate::ccx(v[0], v[1], v[2])),
        (angle, prop::sample::subsequence((0..n).collect::<Vec<_>>(), 2))
            .prop_map(|(t, v)| Gate::cry(t, v[0], v[1])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_sequences_are_unitary(gates in prop::collection::vec(arb_gate(3), 1..12)) {
        let u = sequence_unitary(3, &gates);
        prop_assert!(max_abs_diff(&matmul(&dagger(&u), &u), &identity(8)) < 1e-12);
    }

    #[test]
    fn simulator_agrees_with_dense_product(gates in prop::collection::vec(arb_gate(3), 1..12)) {
        let u = sequence_unitary(3, &gates);
        for basis in 0..8 {
            let mut sv = sim::StateVector::basis(3, basis);
            for g in &gates {
                sv.apply(g);
                prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-10);
            }
            for (a, urow) in sv.amplitudes().iter().zip(&u) {
                prop_assert!((a - urow[basis]).norm() < 1e-12);
            }
        }
    }
}
