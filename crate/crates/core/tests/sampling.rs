use qbn_core::sim::{exact_marginals as circuit_marginals, t_critical};
use qbn_core::{
    check_coverage, compile, exact_marginals, load_fixture, marginals, run_experiment, sample,
    CompileOptions, ExperimentConfig, FixtureId, RegisterMap,
};

#[test]
fn oil4_marginals_within_four_sigma() {
    let bn = load_fixture(FixtureId::Oil4).unwrap().network;
    let circuit = compile(&bn, &CompileOptions::default()).unwrap();
    let map = RegisterMap::for_network(&bn).unwrap();
    let counts = sample(&circuit, 8192, 2024).unwrap();
    let oracle = exact_marginals(&bn).unwrap();
    for m in marginals(&counts, &map).unwrap() {
        let p = oracle.iter().find(|(n, _)| n == &m.node).unwrap().1[0];
        let bound = 4.0 * (p * (1.0 - p) / 8192.0).sqrt();
        assert!((m.probs[0] - p).abs() < bound, "{}: {} vs {p}", m.node, m.probs[0]);
        assert_eq!(m.padding, 0.0);
    }
}

#[test]
fn exact_register_marginals_equal_oracle() {
    for id in FixtureId::ALL {
        let bn = load_fixture(id).unwrap().network;
        let circuit = compile(&bn, &CompileOptions::default()).unwrap();
        let map = RegisterMap::for_network(&bn).unwrap();
        let oracle = exact_marginals(&bn).unwrap();
        for m in circuit_marginals(&circuit, &map).unwrap() {
            let want = &oracle.iter().find(|(n, _)| n == &m.node).unwrap().1;
            for (a, b) in m.probs.iter().zip(want) {
                assert!((a - b).abs() < 1e-9, "{id} {}", m.node);
            }
            assert!(m.padding < 1e-12);
        }
    }
}

#[test]
fn experiments_are_reproducible_from_the_seed() {
    let bn = load_fixture(FixtureId::Bn3).unwrap().network;
    let circuit = compile(&bn, &CompileOptions::default()).unwrap();
    let map = RegisterMap::for_network(&bn).unwrap();
    let cfg = ExperimentConfig {
        runs: 5,
        shots: 1000,
        alpha: 0.05,
        seed: 99,
    };
    let a = run_experiment(&circuit, &map, &cfg).unwrap();
    let b = run_experiment(&circuit, &map, &cfg).unwrap();
    assert_eq!(a, b);
    let c = run_experiment(&circuit, &map, &ExperimentConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a, c);
}

#[test]
fn run_i_uses_seed_plus_i() {
    let bn = load_fixture(FixtureId::Bn3).unwrap().network;
    let circuit = compile(&bn, &CompileOptions::default()).unwrap();
    let map = RegisterMap::for_network(&bn).unwrap();
    let cfg = ExperimentConfig {
        runs: 3,
        shots: 500,
        alpha: 0.05,
        seed: 10,
    };
    let report = run_experiment(&circuit, &map, &cfg).unwrap();
    let runs: Vec<f64> = (0..3)
        .map(|i| {
            let counts = sample(&circuit, 500, 10 + i).unwrap();
            marginals(&counts, &map).unwrap()[0].probs[0]
        })
        .collect();
    let mean = runs.iter().sum::<f64>() / 3.0;
    let sd = (runs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 2.0).sqrt();
    let est = &report.nodes[0].estimates[0];
    assert!((est.mean - mean).abs() < 1e-15);
    assert!((est.sd - sd).abs() < 1e-15);
    let half = t_critical(0.05, 2) * sd / 3f64.sqrt();
    assert!((est.ci[0] - (mean - half)).abs() < 1e-15);
    assert!((est.ci[1] - (mean + half)).abs() < 1e-15);
}

#[test]
fn coverage_detects_a_wrong_expectation() {
    let bn = load_fixture(FixtureId::Oil4).unwrap().network;
    let circuit = compile(&bn, &CompileOptions::default()).unwrap();
    let map = RegisterMap::for_network(&bn).unwrap();
    let report = run_experiment(&circuit, &map, &ExperimentConfig::default()).unwrap();
    let mut wrong = exact_marginals(&bn).unwrap();
    wrong[0].1 = vec![0.70, 0.30];
    let cov = check_coverage(&report, &wrong);
    assert!(!cov.passed);
    assert_eq!(cov.rows.len(), 4);
}

#[test]
fn invalid_configs_are_rejected() {
    let bn = load_fixture(FixtureId::Bn3).unwrap().network;
    let circuit = compile(&bn, &CompileOptions::default()).unwrap();
    let map = RegisterMap::for_network(&bn).unwrap();
    let base = ExperimentConfig::default();
    assert!(run_experiment(&circuit, &map, &ExperimentConfig { runs: 1, ..base }).is_err());
    assert!(run_experiment(&circuit, &map, &ExperimentConfig { alpha: 0.0, ..base }).is_err());
    assert!(run_experiment(&circuit, &map, &ExperimentConfig { shots: 0, ..base }).is_err());
    let bare = compile(&bn, &CompileOptions::default().without_measurements()).unwrap();
    assert!(run_experiment(&bare, &map, &base).is_err());
}
