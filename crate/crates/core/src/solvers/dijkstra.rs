use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cut_graph::{CutGraph, SearchGraph};
use crate::path::{Algorithm, CyclePath};

use super::ShortestPathTree;

/// Dijkstra from the source over every node. On equal tentative cost the
/// smaller predecessor id wins; the heap pops equal costs by smaller node id.
pub fn shortest_path_tree<G: SearchGraph + ?Sized>(sg: &G) -> ShortestPathTree {
    let n = sg.node_count();
    let s = sg.source();
    let mut tree = ShortestPathTree::new(n, s);
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0i64, s)));
    while let Some(Reverse((du, u))) = heap.pop() {
        if done[u] || du > tree.dist[u] {
            continue;
        }
        done[u] = true;
        for e in sg.edges(u) {
            let v = e.to;
            if done[v] {
                continue;
            }
            let nd = du + e.weight;
            if nd < tree.dist[v] {
                tree.dist[v] = nd;
                tree.pred[v] = Some(u);
                heap.push(Reverse((nd, v)));
            } else if nd == tree.dist[v] && tree.pred[v].is_some_and(|p| u < p) {
                tree.pred[v] = Some(u);
            }
        }
    }
    tree
}

/// Minimum-cost s→t path over the undirected cut graph.
pub fn solve_alg1_dijkstra(cut: &CutGraph) -> Option<CyclePath> {
    let tree = shortest_path_tree(cut);
    let nodes = tree.path_to(cut.t)?;
    Some(CyclePath::from_nodes(cut, Algorithm::Alg1Dijkstra, nodes))
}
