use crate::cut_graph::{CutGraph, NodeId, SearchGraph};
use crate::path::{Algorithm, CyclePath};

use super::baseline::angular_order;
use super::ShortestPathTree;

/// Bellman-Ford with an angular visitation schedule: sweeps alternate
/// between increasing and decreasing angle, each relaxing every arc out of
/// each node in turn. Nodes sharing an angle are relaxed together until
/// their distances settle, so coincident endpoints never cost a sweep.
///
/// After every sweep the best s→t path found so far is available, so a
/// caller can stop early and use a rough contour.
#[derive(Debug, Clone)]
pub struct SweepSolver<'a, G: SearchGraph + ?Sized> {
    graph: &'a G,
    order: Vec<NodeId>,
    /// Ranges of `order` holding equal angles.
    groups: Vec<std::ops::Range<usize>>,
    rank: Vec<usize>,
    tree: ShortestPathTree,
    sweeps: usize,
    last_target_improvement: usize,
    converged: bool,
}

impl<'a, G: SearchGraph + ?Sized> SweepSolver<'a, G> {
    pub fn new(graph: &'a G) -> Self {
        let order = angular_order(graph);
        let mut groups: Vec<std::ops::Range<usize>> = Vec::new();
        for (i, &n) in order.iter().enumerate() {
            match groups.last_mut() {
                Some(g) if graph.angle(order[g.start]) == graph.angle(n) => g.end = i + 1,
                _ => groups.push(i..i + 1),
            }
        }
        let mut rank = vec![0; order.len()];
        for (i, &n) in order.iter().enumerate() {
            rank[n] = i;
        }
        Self {
            order,
            groups,
            rank,
            tree: ShortestPathTree::new(graph.node_count(), graph.source()),
            graph,
            sweeps: 0,
            last_target_improvement: 0,
            converged: false,
        }
    }

    /// Runs one sweep; returns whether any distance changed.
    pub fn step(&mut self) -> bool {
        let forward = self.sweeps.is_multiple_of(2);
        self.sweeps += 1;
        let t = self.graph.target();
        let before = self.tree.dist[t];
        let mut changed = false;
        for k in 0..self.groups.len() {
            let group = if forward { k } else { self.groups.len() - 1 - k };
            let range = self.groups[group].clone();
            for _ in 0..range.len() {
                let mut settled = true;
                for i in range.clone() {
                    let u = self.order[i];
                    if !self.tree.reached(u) {
                        continue;
                    }
                    let du = self.tree.dist[u];
                    for e in self.graph.edges(u) {
                        let nd = du + e.weight;
                        if nd < self.tree.dist[e.to] {
                            self.tree.dist[e.to] = nd;
                            self.tree.pred[e.to] = Some(u);
                            changed = true;
                            settled &= !range.contains(&self.rank[e.to]);
                        }
                    }
                }
                if settled {
                    break;
                }
            }
        }
        if self.tree.dist[t] < before {
            self.last_target_improvement = self.sweeps;
        }
        if !changed {
            self.converged = true;
        }
        changed
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Sweep after which the target's distance last improved.
    pub fn sweeps_used(&self) -> usize {
        self.last_target_improvement
    }

    /// Best-known cost to the target.
    pub fn best_cost(&self) -> Option<i64> {
        let t = self.graph.target();
        self.tree.reached(t).then(|| self.tree.dist[t])
    }

    pub fn best_path(&self, algorithm: Algorithm) -> Option<CyclePath> {
        let nodes = self.tree.path_to(self.graph.target())?;
        Some(CyclePath::from_nodes(self.graph, algorithm, nodes).with_sweeps(self.sweeps_used()))
    }

    pub fn tree(&self) -> &ShortestPathTree {
        &self.tree
    }
}

/// Sweeps until nothing relaxes or `max_sweeps` is reached.
pub fn solve_alg1_sweep(cut: &CutGraph, max_sweeps: usize) -> Option<CyclePath> {
    let mut solver = SweepSolver::new(cut);
    while solver.sweeps() < max_sweeps.max(1) && solver.step() {}
    solver.best_path(Algorithm::Alg1Sweep)
}
