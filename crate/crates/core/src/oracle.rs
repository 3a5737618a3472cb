//! Exact inference by full joint enumeration. This is the ground truth every
//! compiled circuit is checked against.

use crate::error::{Error, Result};
use crate::model::{config_digits, config_index, BayesianNetwork, NodeId};

/// Largest joint support the oracle will enumerate.
pub const MAX_ASSIGNMENTS: u128 = 1 << 24;

/// Dense joint distribution over all nodes.
///
/// Assignments are state-index tuples with one entry per node in
/// topological order; the first node is the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    order: Vec<NodeId>,
    radices: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability of an assignment given in topological order.
    pub fn get(&self, assignment: &[usize]) -> f64 {
        self.probs[config_index(assignment, &self.radices)]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (config_digits(i, &self.radices), p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Marginal of the node at position `pos` of [`order`](Self::order).
    pub fn marginal_at(&self, pos: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.radices[pos]];
        for (assignment, p) in self.iter() {
            out[assignment[pos]] += p;
        }
        out
    }
}

/// Every assignment's probability is the product of the matching CPT entries.
pub fn joint_distribution(bn: &BayesianNetwork) -> Result<JointDistribution> {
    let topo = bn.topological_indices()?;
    let radices: Vec<usize> = topo.iter().map(|&i| bn.nodes()[i].num_states()).collect();
    let size = radices
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX);
    if size > MAX_ASSIGNMENTS {
        return Err(Error::EnumerationTooLarge {
            size,
            limit: MAX_ASSIGNMENTS,
        });
    }

    // position of every node inside the topological tuple
    let mut pos = vec![0; bn.len()];
    for (k, &i) in topo.iter().enumerate() {
        pos[i] = k;
    }
    let factors: Vec<(usize, Vec<usize>, Vec<usize>)> = topo
        .iter()
        .map(|&i| {
            let parents = bn.parent_indices(i);
            let parent_pos = parents.iter().map(|&p| pos[p]).collect();
            (i, parent_pos, bn.parent_radices(i))
        })
        .collect();

    let probs = (0..size as usize)
        .map(|flat| {
            let assignment = config_digits(flat, &radices);
            factors
                .iter()
                .enumerate()
                .map(|(k, (i, parent_pos, parent_radices))| {
                    let config: Vec<usize> = parent_pos.iter().map(|&p| assignment[p]).collect();
                    bn.nodes()[*i].cpt.row(config_index(&config, parent_radices))[assignment[k]]
                })
                .product()
        })
        .collect();

    Ok(JointDistribution {
        order: topo.iter().map(|&i| bn.nodes()[i].id.clone()).collect(),
        radices,
        probs,
    })
}

/// Marginal distribution of one node.
pub fn exact_marginal(bn: &BayesianNetwork, node: &str) -> Result<Vec<f64>> {
    let joint = joint_distribution(bn)?;
    let pos = joint
        .order
        .iter()
        .position(|id| id.as_str() == node)
        .ok_or_else(|| Error::UnknownNode(node.to_owned()))?;
    Ok(joint.marginal_at(pos))
}

/// Marginals of every node, in document order.
pub fn exact_marginals(bn: &BayesianNetwork) -> Result<Vec<(NodeId, Vec<f64>)>> {
    let joint = joint_distribution(bn)?;
    Ok(bn
        .nodes()
        .iter()
        .map(|node| {
            let pos = joint.order.iter().position(|id| id == &node.id).unwrap();
            (node.id.clone(), joint.marginal_at(pos))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NodeSpec;

    fn bn3() -> BayesianNetwork {
        BayesianNetwork::new(vec![
            NodeSpec::new("A", &["0", "1"], &[], vec![vec![0.2, 0.8]]),
            NodeSpec::new("B", &["0", "1"], &[], vec![vec![0.3, 0.7]]),
            NodeSpec::new(
                "C",
                &["0", "1"],
                &["A", "B"],
                vec![
                    vec![0.15, 0.85],
                    vec![0.3, 0.7],
                    vec![0.4, 0.6],
                    vec![0.1, 0.9],
                ],
            ),
        ])
        .unwrap()
    }

    #[test]
    fn joint_entry_is_product_of_cpt_entries() {
        let joint = joint_distribution(&bn3()).unwrap();
        assert!((joint.get(&[1, 1, 1]) - 0.8 * 0.7 * 0.9).abs() < 1e-15);
        assert!((joint.get(&[1, 1, 1]) - 0.504).abs() < 1e-12);
        assert!((joint.total() - 1.0).abs() < 1e-12);
        assert_eq!(joint.len(), 8);
    }

    #[test]
    fn single_node() {
        let bn = BayesianNetwork::new(vec![NodeSpec::new("X", &["0", "1"], &[], vec![vec![0.5, 0.5]])])
            .unwrap();
        let joint = joint_distribution(&bn).unwrap();
        assert_eq!(joint.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn root_marginal_is_its_row() {
        let bn = bn3();
        let a = exact_marginal(&bn, "A").unwrap();
        assert!((a[0] - 0.2).abs() < 1e-15 && (a[1] - 0.8).abs() < 1e-15);
        let c = exact_marginal(&bn, "C").unwrap();
        let expected0 = 0.2 * 0.3 * 0.15 + 0.2 * 0.7 * 0.3 + 0.8 * 0.3 * 0.4 + 0.8 * 0.7 * 0.1;
        assert!((c[0] - expected0).abs() < 1e-12);
        assert!(matches!(exact_marginal(&bn, "Z"), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn enumeration_guard() {
        let mut nodes = vec![NodeSpec::new("R0", &["0", "1"], &[], vec![vec![0.5, 0.5]])];
        for i in 1..25 {
            nodes.push(NodeSpec::new(format!("R{i}"), &["0", "1"], &[], vec![vec![0.5, 0.5]]));
        }
        let bn = BayesianNetwork::new(nodes).unwrap();
        assert!(matches!(
            joint_distribution(&bn),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
