use crate::cut_graph::{CutGraph, NodeId, SearchGraph};
use crate::path::{Algorithm, CyclePath};

use super::ShortestPathTree;

/// Visiting order shared by the forward-only solvers: the start first, the
/// target last, everything else by `(angle, id)`.
pub(crate) fn angular_order<G: SearchGraph + ?Sized>(sg: &G) -> Vec<NodeId> {
    let (s, t) = (sg.source(), sg.target());
    let mut order: Vec<NodeId> = (0..sg.node_count()).filter(|&n| n != s && n != t).collect();
    order.sort_by(|&a, &b| sg.angle(a).total_cmp(&sg.angle(b)).then(a.cmp(&b)));
    order.insert(0, s);
    order.push(t);
    order
}

/// Shortest s→t path using only arcs that move forward in angle (equal
/// angles forward in id), by one dynamic-programming pass.
pub fn solve_baseline(cut: &CutGraph) -> Option<CyclePath> {
    let order = angular_order(cut);
    let mut rank = vec![0usize; order.len()];
    for (i, &n) in order.iter().enumerate() {
        rank[n] = i;
    }
    let mut tree = ShortestPathTree::new(cut.node_count(), cut.s);
    for &u in &order {
        if !tree.reached(u) {
            continue;
        }
        let du = tree.dist[u];
        for e in cut.edges(u) {
            if rank[e.to] <= rank[u] {
                continue;
            }
            let nd = du + e.weight;
            let v = e.to;
            if nd < tree.dist[v] || (nd == tree.dist[v] && tree.pred[v].is_some_and(|p| u < p)) {
                tree.dist[v] = nd;
                tree.pred[v] = Some(u);
            }
        }
    }
    let nodes = tree.path_to(cut.t)?;
    Some(CyclePath::from_nodes(cut, Algorithm::Baseline, nodes))
}
