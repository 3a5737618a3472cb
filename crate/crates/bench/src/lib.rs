//! Synthetic inputs for the criterion benches.

use qbn_core::{BayesianNetwork, NodeSpec};

/// Binary network where node `i` has parents `i-1, …, i-k` (as many as
/// exist). Row `j` puts mass `0.1 + 0.8·j/rows` on state 1.
pub fn layered_network(nodes: usize, k: usize) -> BayesianNetwork {
    let names: Vec<String> = (0..nodes).map(|i| format!("N{i}")).collect();
    let specs = (0..nodes)
        .map(|i| {
            let parents: Vec<&str> = (i.saturating_sub(k)..i).map(|p| names[p].as_str()).collect();
            let rows = 1usize << parents.len();
            let cpt = (0..rows)
                .map(|j| {
                    let p1 = 0.1 + 0.8 * j as f64 / rows as f64;
                    vec![1.0 - p1, p1]
                })
                .collect();
            NodeSpec::new(&names[i], &["0", "1"], &parents, cpt)
        })
        .collect();
    BayesianNetwork::new(specs).expect("layered network is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let bn = layered_network(6, 2);
        assert_eq!(bn.len(), 6);
        assert_eq!(bn.nodes()[5].parents.len(), 2);
        assert_eq!(qbn_core::budget(&bn).ancilla_qubits, 1);
    }
}
