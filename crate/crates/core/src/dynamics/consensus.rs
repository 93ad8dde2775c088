use super::{Algorithm, LearningTrace, TraceState};
use crate::error::{Error, Result};

/// Directed weighted neighbor lists: node `k` listens to each `j` in its
/// list with weight `beta_{k,j} >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusNetwork {
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl ConsensusNetwork {
    /// Build from `(k, j, beta)` triples meaning node `k` listens to node `j`.
    pub fn new(nodes: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); nodes];
        for (i, &(k, j, beta)) in edges.iter().enumerate() {
            if k >= nodes || j >= nodes {
                return Err(Error::invariant(format!("edges[{i}]"), format!("node index out of range for {nodes} nodes")));
            }
            if k == j {
                return Err(Error::invariant(format!("edges[{i}]"), "self-loops are not allowed"));
            }
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(Error::invariant(format!("edges[{i}]"), format!("weight {beta} must be finite and >= 0")));
            }
            if neighbors[k].iter().any(|&(m, _)| m == j) {
                return Err(Error::invariant(format!("edges[{i}]"), format!("duplicate edge {k} <- {j}")));
            }
            neighbors[k].push((j, beta));
        }
        Ok(ConsensusNetwork { neighbors })
    }

    /// Every node listens to every other node with the same weight.
    pub fn complete(nodes: usize, beta: f64) -> Result<Self> {
        let edges: Vec<_> = (0..nodes)
            .flat_map(|k| (0..nodes).filter(move |&j| j != k).map(move |j| (k, j, beta)))
            .collect();
        ConsensusNetwork::new(nodes, &edges)
    }

    pub fn nodes(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.neighbors[node]
    }

    /// True when every edge `k <- j` has a reverse edge of equal weight.
    pub fn is_symmetric(&self) -> bool {
        self.neighbors.iter().enumerate().all(|(k, list)| {
            list.iter()
                .all(|&(j, b)| self.neighbors[j].iter().any(|&(m, c)| m == k && c == b))
        })
    }

    fn step(&self, state: &[f64]) -> Vec<f64> {
        state
            .iter()
            .zip(&self.neighbors)
            .map(|(&x, list)| x + list.iter().map(|&(j, b)| b * (state[j] - x)).sum::<f64>())
            .collect()
    }
}

/// Synchronous neighbor averaging. Stops as soon as the next update would
/// move no node by more than `eps`; that final small update is not applied.
/// Divergence is not detected up front: a non-finite state ends the run
/// with a numerical error.
pub fn consensus(network: &ConsensusNetwork, init: &[f64], eps: f64, max_iters: usize) -> Result<LearningTrace> {
    if init.len() != network.nodes() {
        return Err(Error::Shape(format!("{} initial states for {} nodes", init.len(), network.nodes())));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be >= 0")));
    }
    let mut trace = LearningTrace::new(Algorithm::Consensus, 0, TraceState::Scalar(init.to_vec()));
    let mut state = init.to_vec();
    for _ in 0..=max_iters {
        let next = network.step(&state);
        if next.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("consensus state diverged after {} iterations", trace.iterations)));
        }
        let moved = next.iter().zip(&state).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if moved <= eps {
            trace.converged = true;
            break;
        }
        if trace.iterations == max_iters {
            break;
        }
        state = next;
        trace.push(TraceState::Scalar(state.clone()), None, Vec::new());
    }
    Ok(trace)
}
