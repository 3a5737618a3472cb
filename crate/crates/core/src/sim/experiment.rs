//! Repeated sampling runs, t-intervals and coverage checks.

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::sampling::{marginals, Sampler};
use crate::circuit::Circuit;
use crate::compiler::RegisterMap;
use crate::error::{Error, Result};
use crate::model::NodeId;

/// Generator behind every sampling run: ChaCha with 8 rounds, seeded through
/// `SeedableRng::seed_from_u64`.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9, seed_from_u64)";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub shots: u64,
    pub alpha: f64,
    /// Run `i` uses seed `seed + i`.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            runs: 10,
            shots: 8192,
            alpha: 0.05,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateEstimate {
    pub state: String,
    pub mean: f64,
    pub sd: f64,
    pub ci: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeEstimate {
    pub node: NodeId,
    pub estimates: Vec<StateEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub generator: String,
    pub seed: u64,
    pub runs: usize,
    pub shots: u64,
    pub alpha: f64,
    pub t_critical: f64,
    pub nodes: Vec<NodeEstimate>,
}

impl RunReport {
    pub fn node(&self, name: &str) -> Option<&NodeEstimate> {
        self.nodes.iter().find(|n| n.node.as_str() == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Two-sided `t_{α/2}` quantile with `dof` degrees of freedom.
pub fn t_critical(alpha: f64, dof: usize) -> f64 {
    let t = StudentsT::new(0.0, 1.0, dof as f64).expect("positive degrees of freedom");
    t.inverse_cdf(1.0 - alpha / 2.0)
}

/// Runs `runs` independent sampling runs and summarizes each node state by
/// its sample mean, sample standard deviation and `mean ± t·sd/√r`.
pub fn run_experiment(
    circuit: &Circuit,
    map: &RegisterMap,
    config: &ExperimentConfig,
) -> Result<RunReport> {
    if config.runs < 2 {
        return Err(Error::TooFewRuns(config.runs));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidAlpha(config.alpha));
    }
    let sampler = Sampler::new(circuit)?;
    let per_run: Vec<Vec<Vec<f64>>> = (0..config.runs)
        .into_par_iter()
        .map(|i| {
            let counts = sampler.sample(config.shots, config.seed.wrapping_add(i as u64))?;
            Ok(marginals(&counts, map)?
                .into_iter()
                .map(|m| m.probs)
                .collect())
        })
        .collect::<Result<_>>()?;

    let r = config.runs as f64;
    let t = t_critical(config.alpha, config.runs - 1);
    let nodes = map
        .registers()
        .iter()
        .enumerate()
        .map(|(k, reg)| NodeEstimate {
            node: reg.node.clone(),
            estimates: reg
                .states
                .iter()
                .enumerate()
                .map(|(s, label)| {
                    let xs: Vec<f64> = per_run.iter().map(|run| run[k][s]).collect();
                    let mean = xs.iter().sum::<f64>() / r;
                    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
                    let sd = var.sqrt();
                    let half = t * sd / r.sqrt();
                    StateEstimate {
                        state: label.clone(),
                        mean,
                        sd,
                        ci: [mean - half, mean + half],
                    }
                })
                .collect(),
        })
        .collect();

    Ok(RunReport {
        generator: GENERATOR.to_owned(),
        seed: config.seed,
        runs: config.runs,
        shots: config.shots,
        alpha: config.alpha,
        t_critical: t,
        nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRow {
    pub node: NodeId,
    pub state: String,
    pub expected: f64,
    pub mean: f64,
    pub sd: f64,
    pub ci: [f64; 2],
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
    pub passed: bool,
}

/// Checks whether each expected marginal lies inside its interval.
///
/// The last state of every node is implied by the others and is not
/// checked. Nodes missing from `expected` are skipped.
pub fn check_coverage(report: &RunReport, expected: &[(NodeId, Vec<f64>)]) -> CoverageReport {
    let mut rows = Vec::new();
    for node in &report.nodes {
        let Some((_, probs)) = expected.iter().find(|(id, _)| id == &node.node) else {
            continue;
        };
        let checked = node.estimates.len().saturating_sub(1);
        for (est, &p) in node.estimates.iter().zip(probs).take(checked) {
            rows.push(CoverageRow {
                node: node.node.clone(),
                state: est.state.clone(),
                expected: p,
                mean: est.mean,
                sd: est.sd,
                ci: est.ci,
                covered: est.ci[0] <= p && p <= est.ci[1],
            });
        }
    }
    let passed = rows.iter().all(|r| r.covered);
    CoverageReport { rows, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_quantiles() {
        // two-sided 95% with 9 dof
        assert!((t_critical(0.05, 9) - 2.262_157_162_7).abs() < 1e-6);
        assert!((t_critical(0.05, 1) - 12.706_204_736).abs() < 1e-5);
        assert!((t_critical(0.10, 30) - 1.697_260_887).abs() < 1e-6);
    }
}
