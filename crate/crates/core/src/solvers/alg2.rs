use serde::{Deserialize, Serialize};

use crate::cut_graph::{NodeId, ReplicatedGraph, SearchGraph};
use crate::path::{Algorithm, CyclePath};

use super::dijkstra::shortest_path_tree;
use super::INF;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alg2Options {
    /// Upper bound on full passes over the arcs; defaults to ten times the
    /// replicated node count.
    pub max_passes: Option<usize>,
}

/// Mutable search state of one Algorithm II run.
///
/// The current path is always the tree path from the source to the target,
/// so re-parenting a path node re-routes the path. A node is dormant when it
/// is off the path and one of its replicas is on it; dormancy is derived
/// from per-group path counts rather than stored.
#[derive(Debug, Clone)]
pub struct PathState<'t, 'c, 'g> {
    tilde: &'t ReplicatedGraph<'c, 'g>,
    pub dist: Vec<i64>,
    pub parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    pub path: Vec<NodeId>,
    in_path: Vec<bool>,
    dormant: Vec<bool>,
    group_on_path: Vec<u32>,
    group_members: Vec<Vec<NodeId>>,
}

impl<'t, 'c, 'g> PathState<'t, 'c, 'g> {
    fn new(tilde: &'t ReplicatedGraph<'c, 'g>) -> Self {
        let n = tilde.nodes.len();
        let groups = tilde.nodes.iter().map(|r| r.group).max().map_or(0, |g| g + 1);
        let mut group_members = vec![Vec::new(); groups];
        for (i, r) in tilde.nodes.iter().enumerate() {
            group_members[r.group].push(i);
        }
        Self {
            tilde,
            dist: vec![INF; n],
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            path: Vec::new(),
            in_path: vec![false; n],
            dormant: vec![false; n],
            group_on_path: vec![0; groups],
            group_members,
        }
    }

    pub fn in_path(&self, n: NodeId) -> bool {
        self.in_path[n]
    }

    pub fn is_dormant(&self, n: NodeId) -> bool {
        self.dormant[n]
    }

    /// Current dormant set, in node order.
    pub fn dormant(&self) -> Vec<NodeId> {
        (0..self.dist.len()).filter(|&n| self.is_dormant(n)).collect()
    }

    fn set_parent(&mut self, v: NodeId, u: Option<NodeId>) {
        if let Some(old) = self.parent[v] {
            if let Some(i) = self.children[old].iter().position(|&c| c == v) {
                self.children[old].swap_remove(i);
            }
        }
        self.parent[v] = u;
        if let Some(u) = u {
            self.children[u].push(v);
        }
    }

    fn tree_path(&self, node: NodeId) -> Vec<NodeId> {
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Whether the tree path from the source to `u` contains no replica pair.
    fn prefix_consistent(&self, u: NodeId) -> bool {
        let mut seen: Vec<usize> = Vec::new();
        let mut cur = Some(u);
        while let Some(n) = cur {
            if !self.tilde.is_terminal(n) {
                let g = self.tilde.nodes[n].group;
                if seen.contains(&g) {
                    return false;
                }
                seen.push(g);
            }
            cur = self.parent[n];
        }
        true
    }

    /// Re-reads the path from the tree; returns groups newly put on it.
    fn refresh_path(&mut self) -> Vec<usize> {
        let before = self.group_on_path.clone();
        let mut touched = Vec::new();
        for &n in &self.path {
            self.in_path[n] = false;
            if !self.tilde.is_terminal(n) {
                let g = self.tilde.nodes[n].group;
                self.group_on_path[g] -= 1;
                touched.push(g);
            }
        }
        self.path = self.tree_path(self.tilde.t);
        let mut fresh = Vec::new();
        for &n in &self.path {
            self.in_path[n] = true;
            if !self.tilde.is_terminal(n) {
                let g = self.tilde.nodes[n].group;
                self.group_on_path[g] += 1;
                touched.push(g);
                if before[g] == 0 {
                    fresh.push(g);
                }
            }
        }
        for g in touched {
            let on_path = self.group_on_path[g] > 0;
            for &m in &self.group_members[g] {
                self.dormant[m] = on_path && !self.in_path[m];
            }
        }
        fresh
    }

    /// Clears distances and parents of every descendant of `root`.
    fn invalidate_descendants(&mut self, root: NodeId) {
        let mut stack = std::mem::take(&mut self.children[root]);
        while let Some(n) = stack.pop() {
            self.dist[n] = INF;
            self.parent[n] = None;
            stack.append(&mut self.children[n]);
        }
    }
}

#[derive(Clone, Copy)]
struct DirectedArc<W = i64> {
    u: u32,
    v: u32,
    w: W,
}

/// Directed arcs ordered by the smaller endpoint angle, then `(u, v)`.
///
/// Adjacency lists are sorted by target, so reading them node by node yields
/// `(u, v)` order; a stable counting sort on the dense rank of the smaller
/// angle finishes the job without comparing floats per arc.
fn arc_order(tilde: &ReplicatedGraph) -> Vec<DirectedArc> {
    let n = tilde.node_count();
    let mut by_angle: Vec<NodeId> = (0..n).collect();
    by_angle.sort_by(|&a, &b| tilde.angle(a).total_cmp(&tilde.angle(b)));
    let mut level = vec![0usize; n];
    let mut next = 0;
    for (i, &node) in by_angle.iter().enumerate() {
        if i > 0 && tilde.angle(node) != tilde.angle(by_angle[i - 1]) {
            next += 1;
        }
        level[node] = next;
    }
    let key = |u: NodeId, v: NodeId| level[u].min(level[v]);
    let mut start = vec![0usize; next + 2];
    for u in 0..n {
        for e in tilde.edges(u) {
            start[key(u, e.to) + 1] += 1;
        }
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut out = vec![DirectedArc { u: 0, v: 0, w: 0 }; start[next + 1]];
    for u in 0..n {
        for e in tilde.edges(u) {
            let slot = &mut start[key(u, e.to)];
            out[*slot] = DirectedArc { u: u as u32, v: e.to as u32, w: e.weight };
            *slot += 1;
        }
    }
    out
}

/// Relaxation passes until one changes nothing or `limit` is reached;
/// returns the number of passes made.
fn run_passes<W: Copy + Into<i64>>(st: &mut PathState, directed: &[DirectedArc<W>], limit: usize) -> usize {
    let mut passes = 0;
    while passes < limit {
        passes += 1;
        let mut changed = false;
        for a in directed {
            let (u, v) = (a.u as usize, a.v as usize);
            // Saturates at INF for unreached sources, which never improves.
            let nd = st.dist[u].saturating_add(a.w.into());
            if nd >= st.dist[v] || st.dormant[u] || st.dormant[v] {
                continue;
            }
            let reroute = !st.in_path(u) && st.in_path(v);
            if reroute && !st.prefix_consistent(u) {
                continue;
            }
            st.set_parent(v, Some(u));
            st.dist[v] = nd;
            changed = true;
            if st.in_path(v) {
                let fresh = st.refresh_path();
                for g in fresh {
                    let members = st.group_members[g].clone();
                    for m in members {
                        if !st.in_path(m) {
                            st.invalidate_descendants(m);
                        }
                    }
                }
                debug_assert!(crate::cut_graph::is_consistent(st.tilde, &st.path));
            }
        }
        if !changed {
            break;
        }
    }
    passes
}

pub fn default_pass_limit(tilde: &ReplicatedGraph) -> usize {
    10 * tilde.nodes.len()
}

/// Greedy improvement of `seed` over the replicated graph with the default
/// options.
pub fn solve_alg2(tilde: &ReplicatedGraph, seed: &CyclePath) -> CyclePath {
    solve_alg2_with(tilde, seed, Alg2Options::default())
}

/// Greedy improvement of an Algorithm I path over the replicated graph.
///
/// `seed.nodes` must be cut-graph node ids. The search tree starts as the
/// cut graph's shortest-path tree on the k = 0 copies (or just the seed path
/// if the seed is not the Dijkstra path). Passes visit directed arcs by
/// ascending smaller-endpoint angle and relax them Bellman-Ford style,
/// skipping dormant endpoints; a relaxation that would re-route the current
/// path is taken only if the tree path to the new parent is consistent,
/// after which the descendants of newly dormant nodes are cleared. Passes
/// repeat until one changes nothing. The returned cost never exceeds the
/// seed's.
pub fn solve_alg2_with(tilde: &ReplicatedGraph, seed: &CyclePath, opts: Alg2Options) -> CyclePath {
    let cut = tilde.cut;
    let mut st = PathState::new(tilde);
    let z = &tilde.zero_copy;

    let tree = shortest_path_tree(cut);
    if tree.path_to(cut.t).as_deref() == Some(seed.nodes.as_slice()) {
        let mut order: Vec<NodeId> = (0..cut.nodes.len()).filter(|&b| tree.reached(b)).collect();
        order.sort_by_key(|&b| (tree.dist[b], b));
        for b in order {
            st.dist[z[b]] = tree.dist[b];
            st.set_parent(z[b], tree.pred[b].map(|p| z[p]));
        }
    } else {
        st.dist[tilde.s] = 0;
        for w in seed.nodes.windows(2) {
            let (a, b) = (z[w[0]], z[w[1]]);
            let e = tilde.edge(a, b).expect("seed path must lie in the cut graph");
            st.dist[b] = st.dist[a] + e.weight;
            st.set_parent(b, Some(a));
        }
    }
    st.refresh_path();

    let directed = arc_order(tilde);
    let limit = opts.max_passes.unwrap_or_else(|| default_pass_limit(tilde));
    // Narrow weights shrink the arc stream each pass reads.
    let narrow: Option<Vec<DirectedArc<i32>>> =
        directed.iter().map(|a| Some(DirectedArc { u: a.u, v: a.v, w: i32::try_from(a.w).ok()? })).collect();
    let passes = match narrow {
        Some(arcs) => run_passes(&mut st, &arcs, limit),
        None => run_passes(&mut st, &directed, limit),
    };
    CyclePath::from_nodes(tilde, Algorithm::Alg2, st.path.clone()).with_passes(passes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular_graph::build_graph;
    use crate::cut_graph::{build_cut_graph, replicate, ReplicationRange};
    use crate::synth::{gen_comb, gen_random_graph};

    fn sorted_by_comparison(tilde: &ReplicatedGraph) -> Vec<(u32, u32, i64)> {
        let mut all: Vec<(u32, u32, i64)> = Vec::new();
        for a in &tilde.arcs {
            all.push((a.u as u32, a.v as u32, a.weight));
            all.push((a.v as u32, a.u as u32, a.weight));
        }
        let key = |a: &(u32, u32, i64)| tilde.angle(a.0 as usize).min(tilde.angle(a.1 as usize));
        all.sort_by(|x, y| key(x).total_cmp(&key(y)).then((x.0, x.1).cmp(&(y.0, y.1))));
        all
    }

    #[test]
    fn arc_order_matches_comparison_sort() {
        let comb = gen_comb(3, 4).unwrap().with_clutter(20, 4);
        let graphs = [
            build_graph(&comb.fragments, comb.query).unwrap(),
            gen_random_graph(14, 3).unwrap(),
            gen_random_graph(9, 8).unwrap(),
        ];
        for g in &graphs {
            let cut = build_cut_graph(g).unwrap();
            for range in [ReplicationRange::Wide, ReplicationRange::Narrow] {
                let tilde = replicate(&cut, range);
                let fast: Vec<(u32, u32, i64)> = arc_order(&tilde).iter().map(|a| (a.u, a.v, a.w)).collect();
                assert_eq!(fast, sorted_by_comparison(&tilde));
            }
        }
    }
}
