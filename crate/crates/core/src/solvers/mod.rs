//! The three contour extractors.
//!
//! * [`solve_baseline`]: forward-only dynamic programming over the cut graph.
//! * [`solve_alg1_dijkstra`] / [`solve_alg1_sweep`]: shortest s→t path over
//!   the undirected cut graph, either by Dijkstra or by alternating angular
//!   Bellman-Ford sweeps.
//! * [`solve_alg2`]: greedy improvement of the Algorithm I path over the
//!   replicated graph.

mod alg2;
mod baseline;
mod dijkstra;
mod sweep;

pub use alg2::{default_pass_limit, solve_alg2, solve_alg2_with, Alg2Options, PathState};
pub use baseline::solve_baseline;
pub use dijkstra::{shortest_path_tree, solve_alg1_dijkstra};
pub use sweep::{solve_alg1_sweep, SweepSolver};

use crate::cut_graph::NodeId;

pub(crate) const INF: i64 = i64::MAX;

/// Distances and predecessors from the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathTree {
    pub dist: Vec<i64>,
    pub pred: Vec<Option<NodeId>>,
}

impl ShortestPathTree {
    pub(crate) fn new(n: usize, source: NodeId) -> Self {
        let mut dist = vec![INF; n];
        dist[source] = 0;
        Self { dist, pred: vec![None; n] }
    }

    pub fn reached(&self, node: NodeId) -> bool {
        self.dist[node] != INF
    }

    /// Node sequence from the source to `node`, if reachable.
    pub fn path_to(&self, node: NodeId) -> Option<Vec<NodeId>> {
        if !self.reached(node) {
            return None;
        }
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
            if path.len() > self.dist.len() {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}
