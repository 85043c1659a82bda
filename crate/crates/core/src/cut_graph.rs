//! Search graphs derived from the angular graph.
//!
//! [`CutGraph`] assigns every vertex its direction angle from the critical
//! line (the ray from the fixation point through the start vertex), adds a
//! target at angle 2π colocated with the start, and drops every arc whose
//! endpoints differ in angle by `theta` or more. [`ReplicatedGraph`] copies
//! each vertex at ±2π so paths may wrap across the critical line.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angular_graph::{AngularGraph, ArcExport, ArcKind, GraphExport, VertexExport, VertexId};
use crate::error::Result;
use crate::geometry::direction_angle;

pub type NodeId = usize;

/// Directed view of one arc from a node's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub to: NodeId,
    pub weight: i64,
    pub kind: ArcKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchArc {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: i64,
    pub kind: ArcKind,
}

/// Common interface the solvers walk.
pub trait SearchGraph {
    fn graph(&self) -> &AngularGraph;
    fn node_count(&self) -> usize;
    /// Outgoing edges, sorted by target node id.
    fn edges(&self, node: NodeId) -> &[Edge];
    fn angle(&self, node: NodeId) -> f64;
    /// Angular-graph vertex the node stands for.
    fn vertex(&self, node: NodeId) -> VertexId;
    fn source(&self) -> NodeId;
    fn target(&self) -> NodeId;

    fn edge(&self, u: NodeId, v: NodeId) -> Option<Edge> {
        let edges = self.edges(u);
        edges.binary_search_by_key(&v, |e| e.to).ok().map(|i| edges[i])
    }
}

/// Direction angle of every vertex, measured from the critical line.
pub fn assign_angles(g: &AngularGraph) -> Result<Vec<f64>> {
    let o = g.query.fixation;
    let s = g.position(g.start).to_point();
    g.vertices
        .iter()
        .map(|v| {
            if v.id == g.start {
                direction_angle(o, s, s).map(|_| 0.0)
            } else {
                direction_angle(o, s, v.position.to_point())
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutNode {
    pub vertex: VertexId,
    pub angle: f64,
}

/// The angular graph cut open along the critical line.
#[derive(Debug, Clone)]
pub struct CutGraph<'g> {
    pub graph: &'g AngularGraph,
    pub nodes: Vec<CutNode>,
    pub s: NodeId,
    pub t: NodeId,
    /// Arcs surviving the cut.
    pub arcs: Vec<SearchArc>,
    /// Arcs after duplicating the start's arcs onto the target, before the cut.
    pub uncut: Vec<SearchArc>,
    adjacency: Vec<Vec<Edge>>,
}

/// Cuts `g` at its critical line.
///
/// Node ids coincide with vertex ids. When the interest pixel split a
/// fragment, the target is the other colocated endpoint and receives copies
/// of the start's gap arcs; otherwise the target is a new node aliasing the
/// start and receives copies of all its arcs.
pub fn build_cut_graph(g: &AngularGraph) -> Result<CutGraph<'_>> {
    let angles = assign_angles(g)?;
    let mut nodes: Vec<CutNode> = g.vertices.iter().map(|v| CutNode { vertex: v.id, angle: angles[v.id] }).collect();
    let s = g.start;
    let closing = g.closing();
    let t = if closing == s {
        nodes.push(CutNode { vertex: s, angle: TAU });
        nodes.len() - 1
    } else {
        nodes[closing].angle = TAU;
        closing
    };
    let split = closing != s;

    // Angular-graph arcs are already unique with u < v; only the copies made
    // for the target can duplicate an existing pair.
    let mut uncut: Vec<SearchArc> = Vec::with_capacity(g.arcs.len() + g.neighbors(s).len());
    uncut.extend(g.arcs.iter().map(|a| SearchArc { u: a.u, v: a.v, weight: a.weight, kind: a.kind }));
    let mut linked = vec![false; nodes.len()];
    linked[t] = true;
    if split {
        for &(nb, _) in g.neighbors(t) {
            linked[nb] = true;
        }
    }
    for &(nb, idx) in g.neighbors(s) {
        let a = g.arcs[idx];
        if (split && a.kind == ArcKind::Fragment) || linked[nb] {
            continue;
        }
        linked[nb] = true;
        uncut.push(SearchArc { u: t.min(nb), v: t.max(nb), weight: a.weight, kind: a.kind });
    }

    let theta = g.query.theta;
    let arcs: Vec<SearchArc> =
        uncut.iter().copied().filter(|a| (nodes[a.u].angle - nodes[a.v].angle).abs() < theta).collect();
    let adjacency = adjacency_of(nodes.len(), &arcs);
    Ok(CutGraph { graph: g, nodes, s, t, arcs, uncut, adjacency })
}

fn adjacency_of(n: usize, arcs: &[SearchArc]) -> Vec<Vec<Edge>> {
    let mut degree = vec![0usize; n];
    for a in arcs {
        degree[a.u] += 1;
        degree[a.v] += 1;
    }
    let mut adjacency: Vec<Vec<Edge>> = degree.into_iter().map(Vec::with_capacity).collect();
    // Arcs mostly arrive sorted by (u, v) with u < v, so lower neighbors
    // followed by higher ones usually leave each list sorted already.
    for a in arcs {
        adjacency[a.v].push(Edge { to: a.u, weight: a.weight, kind: a.kind });
    }
    for a in arcs {
        adjacency[a.u].push(Edge { to: a.v, weight: a.weight, kind: a.kind });
    }
    for list in &mut adjacency {
        if !list.is_sorted_by_key(|e| e.to) {
            list.sort_unstable_by_key(|e| e.to);
        }
    }
    adjacency
}

impl SearchGraph for CutGraph<'_> {
    fn graph(&self) -> &AngularGraph {
        self.graph
    }
    fn node_count(&self) -> usize {
        self.nodes.len()
    }
    fn edges(&self, node: NodeId) -> &[Edge] {
        &self.adjacency[node]
    }
    fn angle(&self, node: NodeId) -> f64 {
        self.nodes[node].angle
    }
    fn vertex(&self, node: NodeId) -> VertexId {
        self.nodes[node].vertex
    }
    fn source(&self) -> NodeId {
        self.s
    }
    fn target(&self) -> NodeId {
        self.t
    }
}

impl CutGraph<'_> {
    pub fn to_export(&self) -> GraphExport {
        export_nodes(self, |_| (None, None), &self.arcs, self.s, self.t)
    }
}

fn export_nodes<G: SearchGraph>(
    sg: &G,
    extra: impl Fn(NodeId) -> (Option<i8>, Option<usize>),
    arcs: &[SearchArc],
    s: NodeId,
    t: NodeId,
) -> GraphExport {
    let g = sg.graph();
    GraphExport {
        vertices: (0..sg.node_count())
            .map(|n| {
                let v = g.vertices[sg.vertex(n)];
                let (copy_k, replica_group) = extra(n);
                VertexExport {
                    id: n,
                    x: v.position.x,
                    y: v.position.y,
                    fragment: g.fragment_ids[v.fragment],
                    mate: v.mate,
                    angle: Some(sg.angle(n)),
                    copy_k,
                    replica_group,
                }
            })
            .collect(),
        arcs: arcs.iter().map(|a| ArcExport { u: a.u, v: a.v, w: a.weight, kind: a.kind }).collect(),
        s,
        t: Some(t),
        theta: g.query.theta,
        fixation: g.query.fixation,
    }
}

/// Angular extent of the replicated graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplicationRange {
    /// Copies span (−2π, 4π).
    #[default]
    Wide,
    /// Copies restricted to (−π, 3π).
    Narrow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicaNode {
    /// Node of the cut graph this is a copy of.
    pub base: NodeId,
    pub copy: i8,
    pub angle: f64,
    /// Copies of one contour endpoint share a group; the start and target
    /// each sit alone in theirs.
    pub group: usize,
}

/// The cut graph with every non-terminal node copied at angle ± 2π.
#[derive(Debug, Clone)]
pub struct ReplicatedGraph<'c, 'g> {
    pub cut: &'c CutGraph<'g>,
    pub nodes: Vec<ReplicaNode>,
    pub s: NodeId,
    pub t: NodeId,
    pub arcs: Vec<SearchArc>,
    /// Replicated node id of each cut-graph node's k = 0 copy.
    pub zero_copy: Vec<NodeId>,
    adjacency: Vec<Vec<Edge>>,
}

pub fn replicate<'c, 'g>(cut: &'c CutGraph<'g>, range: ReplicationRange) -> ReplicatedGraph<'c, 'g> {
    let (lo, hi) = match range {
        ReplicationRange::Wide => (-TAU, 2.0 * TAU),
        ReplicationRange::Narrow => (-PI, 3.0 * PI),
    };
    let mut nodes = Vec::with_capacity(3 * cut.nodes.len());
    let mut copies: Vec<Vec<NodeId>> = vec![Vec::new(); cut.nodes.len()];
    let mut zero_copy = vec![usize::MAX; cut.nodes.len()];
    for (base, cn) in cut.nodes.iter().enumerate() {
        let terminal = base == cut.s || base == cut.t;
        let ks: &[i8] = if terminal { &[0] } else { &[-1, 0, 1] };
        for &k in ks {
            let angle = cn.angle + TAU * f64::from(k);
            let keep = k == 0 || range == ReplicationRange::Wide || (angle > lo && angle < hi);
            if keep {
                let id = nodes.len();
                nodes.push(ReplicaNode { base, copy: k, angle, group: base });
                copies[base].push(id);
                if k == 0 {
                    zero_copy[base] = id;
                }
            }
        }
    }
    let theta = cut.graph.query.theta;
    let mut arcs = Vec::with_capacity(3 * cut.uncut.len());
    for a in &cut.uncut {
        for &cu in &copies[a.u] {
            for &cv in &copies[a.v] {
                if (nodes[cu].angle - nodes[cv].angle).abs() < theta {
                    arcs.push(SearchArc { u: cu.min(cv), v: cu.max(cv), weight: a.weight, kind: a.kind });
                }
            }
        }
    }
    let adjacency = adjacency_of(nodes.len(), &arcs);
    ReplicatedGraph { cut, s: zero_copy[cut.s], t: zero_copy[cut.t], nodes, arcs, zero_copy, adjacency }
}

impl SearchGraph for ReplicatedGraph<'_, '_> {
    fn graph(&self) -> &AngularGraph {
        self.cut.graph
    }
    fn node_count(&self) -> usize {
        self.nodes.len()
    }
    fn edges(&self, node: NodeId) -> &[Edge] {
        &self.adjacency[node]
    }
    fn angle(&self, node: NodeId) -> f64 {
        self.nodes[node].angle
    }
    fn vertex(&self, node: NodeId) -> VertexId {
        self.cut.nodes[self.nodes[node].base].vertex
    }
    fn source(&self) -> NodeId {
        self.s
    }
    fn target(&self) -> NodeId {
        self.t
    }
}

impl ReplicatedGraph<'_, '_> {
    pub fn is_terminal(&self, n: NodeId) -> bool {
        n == self.s || n == self.t
    }

    /// Distinct nodes standing for the same contour endpoint.
    pub fn are_replicas(&self, a: NodeId, b: NodeId) -> bool {
        a != b && !self.is_terminal(a) && !self.is_terminal(b) && self.nodes[a].group == self.nodes[b].group
    }

    pub fn to_export(&self) -> GraphExport {
        export_nodes(self, |n| (Some(self.nodes[n].copy), Some(self.nodes[n].group)), &self.arcs, self.s, self.t)
    }
}

/// Nodes off `path` that have a replica on it.
pub fn dormant_set(tilde: &ReplicatedGraph, path: &[NodeId]) -> BTreeSet<NodeId> {
    let on_path: BTreeSet<NodeId> = path.iter().copied().collect();
    let groups: BTreeSet<usize> =
        path.iter().filter(|&&n| !tilde.is_terminal(n)).map(|&n| tilde.nodes[n].group).collect();
    (0..tilde.nodes.len())
        .filter(|n| !on_path.contains(n) && !tilde.is_terminal(*n))
        .filter(|&n| groups.contains(&tilde.nodes[n].group))
        .collect()
}

/// True iff no two nodes of `path` are replicas of each other.
pub fn is_consistent(tilde: &ReplicatedGraph, path: &[NodeId]) -> bool {
    let mut seen = BTreeSet::new();
    path.iter().filter(|&&n| !tilde.is_terminal(n)).all(|&n| seen.insert(tilde.nodes[n].group))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular_graph::{AngularGraph, Query};
    use crate::edgemap::{End, EndpointRef, Fragment, FragmentSet};
    use crate::geometry::{Pixel, Point};
    use std::f64::consts::FRAC_PI_2;

    fn frag(id: usize, pts: &[(i64, i64)]) -> Fragment {
        Fragment { id, pixels: pts.iter().map(|&(x, y)| Pixel::new(x, y)).collect() }
    }

    /// Octagon-ish ring of 4 fragments around (10, 10), split at (10, 2).
    fn ring() -> AngularGraph {
        let set = FragmentSet::new(
            vec![
                frag(0, &[(10, 2), (14, 3), (17, 6)]),
                frag(1, &[(18, 10), (17, 14), (14, 17)]),
                frag(2, &[(10, 18), (6, 17), (3, 14)]),
                frag(3, &[(2, 10), (3, 6), (6, 3)]),
                frag(4, &[(8, 2), (9, 2), (10, 2)]),
            ],
            (20, 20),
        );
        let q = Query::new(Point::new(10.0, 10.3), Point::new(10.0, 2.0), FRAC_PI_2).unwrap();
        AngularGraph::from_fragments(
            &set,
            q,
            EndpointRef { fragment: 4, end: End::Tail },
            EndpointRef { fragment: 0, end: End::Head },
        )
        .unwrap()
    }

    #[test]
    fn angles_from_start() {
        let g = ring();
        let angles = assign_angles(&g).unwrap();
        assert_eq!(angles[g.start], 0.0);
        // (18,10) is a quarter turn from the upward critical line.
        let v = g.vertices.iter().find(|v| v.position == Pixel::new(18, 10)).unwrap();
        assert!((angles[v.id] - FRAC_PI_2).abs() < 0.05);
        // (9,2) sits just clockwise of the start: close to 2pi.
        let v = g.vertices.iter().find(|v| v.position == Pixel::new(8, 2)).unwrap();
        assert!(angles[v.id] > TAU - 0.3);
    }

    #[test]
    fn cut_removes_crossing_arcs_only() {
        let g = ring();
        let cut = build_cut_graph(&g).unwrap();
        assert_eq!(cut.s, 0);
        assert_eq!(cut.angle(cut.t), TAU);
        assert_eq!(cut.nodes.len(), g.vertex_count());
        for a in &cut.arcs {
            assert!((cut.angle(a.u) - cut.angle(a.v)).abs() < g.query.theta);
        }
        for a in &cut.uncut {
            let kept = cut.arcs.contains(a);
            let crossing = (cut.angle(a.u) - cut.angle(a.v)).abs() >= g.query.theta;
            assert_eq!(kept, !crossing);
        }
        // s keeps its fragment arc; t keeps its own.
        assert!(cut.edge(cut.s, g.vertices[cut.s].mate).is_some());
        assert!(cut.edge(cut.t, g.vertices[cut.t].mate).is_some());
    }

    #[test]
    fn endpoint_start_gets_alias_target() {
        let set =
            FragmentSet::new(vec![frag(0, &[(10, 2), (14, 3), (17, 6)]), frag(1, &[(18, 10), (17, 14)])], (20, 20));
        let q = Query::new(Point::new(10.0, 10.3), Point::new(10.0, 2.0), FRAC_PI_2).unwrap();
        let g = crate::angular_graph::build_graph(&set, q).unwrap();
        let cut = build_cut_graph(&g).unwrap();
        assert_eq!(cut.nodes.len(), g.vertex_count() + 1);
        assert_eq!(cut.vertex(cut.t), g.start);
        // The start's fragment runs counter-clockwise, so only s keeps it.
        assert!(cut.edge(cut.s, 1).is_some());
        assert!(cut.edge(cut.t, 1).is_none());
    }

    #[test]
    fn fragment_arc_across_critical_line_removed() {
        // Fragment straddling the critical line: ends at angle ~0.1 and ~2pi-0.1.
        let set = FragmentSet::new(vec![frag(0, &[(10, 0), (11, 0)]), frag(1, &[(9, 1), (11, 1)])], (20, 20));
        let q = Query::new(Point::new(10.0, 10.0), Point::new(10.0, 0.0), FRAC_PI_2).unwrap();
        let g = crate::angular_graph::build_graph(&set, q).unwrap();
        let cut = build_cut_graph(&g).unwrap();
        assert!(cut.edge(2, 3).is_none());
        assert!(g.arc_between(2, 3).is_some());
    }

    #[test]
    fn replication_counts_and_invariants() {
        let g = ring();
        let cut = build_cut_graph(&g).unwrap();
        let tilde = replicate(&cut, ReplicationRange::Wide);
        assert_eq!(tilde.nodes.len(), 3 * (cut.nodes.len() - 2) + 2);
        for n in &tilde.nodes {
            assert!(n.angle >= -TAU && n.angle < 2.0 * TAU);
        }
        for a in &tilde.arcs {
            let (na, nb) = (tilde.nodes[a.u], tilde.nodes[a.v]);
            assert!((na.angle - nb.angle).abs() < g.query.theta);
            assert_ne!(na.group, nb.group, "copies of one endpoint are never adjacent");
        }
        // Every cut-graph arc reappears between k = 0 copies with equal weight.
        for a in &cut.arcs {
            let e = tilde.edge(tilde.zero_copy[a.u], tilde.zero_copy[a.v]).unwrap();
            assert_eq!(e.weight, a.weight);
        }
        // Arcs removed by the cut come back between adjacent copies.
        // The s-t link is the one exception: terminals have no other copies.
        let removed: Vec<_> = cut
            .uncut
            .iter()
            .filter(|a| !cut.arcs.contains(a) && (a.u, a.v) != (cut.s.min(cut.t), cut.s.max(cut.t)))
            .collect();
        assert!(!removed.is_empty());
        for a in removed {
            let found = tilde.arcs.iter().any(|r| {
                tilde.nodes[r.u].base.min(tilde.nodes[r.v].base) == a.u
                    && tilde.nodes[r.u].base.max(tilde.nodes[r.v].base) == a.v
            });
            assert!(found, "crossing arc {a:?} missing from replicated graph");
        }
        let narrow = replicate(&cut, ReplicationRange::Narrow);
        assert!(narrow.nodes.len() < tilde.nodes.len());
        assert!(narrow.nodes.iter().all(|n| n.angle > -PI && n.angle < 3.0 * PI));
    }

    #[test]
    fn dormant_and_consistency() {
        let g = ring();
        let cut = build_cut_graph(&g).unwrap();
        let tilde = replicate(&cut, ReplicationRange::Wide);
        let (s, t) = (tilde.s, tilde.t);
        assert!(dormant_set(&tilde, &[s, t]).is_empty());
        assert!(is_consistent(&tilde, &[s, t]));

        let a0 = tilde.zero_copy[1];
        let copies: Vec<NodeId> = (0..tilde.nodes.len()).filter(|&n| tilde.nodes[n].base == 1).collect();
        assert_eq!(copies.len(), 3);
        let d = dormant_set(&tilde, &[s, a0, t]);
        let expected: BTreeSet<NodeId> = copies.iter().copied().filter(|&n| n != a0).collect();
        assert_eq!(d, expected);

        let minus = copies.iter().copied().find(|&n| tilde.nodes[n].copy == -1).unwrap();
        let d = dormant_set(&tilde, &[s, minus, t]);
        assert!(d.contains(&a0) && !d.contains(&minus) && d.len() == 2);

        assert!(!is_consistent(&tilde, &[s, a0, minus, t]));
        let zero_path: Vec<NodeId> = (0..cut.nodes.len()).map(|b| tilde.zero_copy[b]).collect();
        assert!(is_consistent(&tilde, &zero_path));
    }
}
