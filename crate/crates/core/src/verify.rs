//! Independent validation of extracted contours, and exhaustive-search
//! oracles for small graphs.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angular_graph::{AngularGraph, ArcKind, Query, VertexId};
use crate::cut_graph::{assign_angles, CutGraph, NodeId, SearchGraph};
use crate::error::{Error, Result};
use crate::geometry::{crosses_seam, direction_angle, visual_angle, Point};
use crate::path::{Algorithm, CyclePath};

pub use crate::geometry::winding_number;

/// Largest graph the exhaustive oracles accept.
pub const ORACLE_VERTEX_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub is_simple: bool,
    pub encloses: bool,
    pub theta_ok: bool,
    pub crossings: usize,
    pub max_gap_angle: f64,
    pub winding: Option<i64>,
}

impl VerificationReport {
    /// Simple, enclosing the fixation point once, every gap under `theta`.
    pub fn passed(&self) -> bool {
        self.is_simple && self.encloses && self.theta_ok
    }
}

/// Checks a contour in image space.
///
/// Simplicity means no fragment traversed twice, no angular-graph vertex
/// visited twice, and no vertex position repeated except where consecutive
/// vertices coincide (a zero-length gap) and at the shared start/end.
pub fn verify_cycle(path: &CyclePath, query: &Query) -> Result<VerificationReport> {
    let positions = path.positions();
    if path.segments.is_empty() || positions.first() != positions.last() {
        return Err(Error::OpenPath(format!(
            "contour of {} segments does not return to its start",
            path.segments.len()
        )));
    }
    let o = query.fixation;

    let mut fragments = BTreeSet::new();
    let mut is_simple = path.segments.iter().filter_map(|s| s.fragment).all(|f| fragments.insert(f));
    let body = &path.vertices[..path.vertices.len() - 1];
    let mut seen_vertices = BTreeSet::new();
    is_simple &= body.iter().all(|v| seen_vertices.insert(*v));
    let mut collapsed = positions[..positions.len() - 1].to_vec();
    collapsed.dedup();
    let mut seen_positions = BTreeSet::new();
    is_simple &= collapsed.iter().all(|p| seen_positions.insert(p.scan_key()));

    let polygon: Vec<Point> = path.polygon.iter().map(|p| p.to_point()).collect();
    let winding = winding_number(&polygon, o).ok();
    let encloses = winding.is_some_and(|w| w.abs() == 1);

    let mut theta_ok = true;
    let mut max_gap_angle: f64 = 0.0;
    for s in path.segments.iter().filter(|s| s.kind == ArcKind::Gap) {
        match visual_angle(o, s.from.to_point(), s.to.to_point()) {
            Ok(a) => {
                max_gap_angle = max_gap_angle.max(a);
                theta_ok &= a < query.theta;
            }
            Err(_) => theta_ok = false,
        }
    }

    let start = positions[0].to_point();
    let last = positions.len() - 1;
    let mut angles = Vec::with_capacity(positions.len());
    for (i, p) in positions.iter().enumerate() {
        angles.push(if i == 0 {
            0.0
        } else if i == last {
            TAU
        } else {
            direction_angle(o, start, p.to_point()).unwrap_or(0.0)
        });
    }
    let crossings = 1 + angles.windows(2).filter(|w| crosses_seam(w[0], w[1])).count();

    Ok(VerificationReport { is_simple, encloses, theta_ok, crossings, max_gap_angle, winding })
}

fn check_budget(n: usize) -> Result<()> {
    if n > ORACLE_VERTEX_LIMIT {
        return Err(Error::BudgetExceeded { vertices: n, limit: ORACLE_VERTEX_LIMIT });
    }
    Ok(())
}

/// Minimum-cost simple s→t path of the cut graph by depth-first enumeration
/// of simple paths, pruning partial paths that already cost at least the
/// best complete one.
pub fn brute_force_shortest_path(cut: &CutGraph) -> Result<Option<CyclePath>> {
    let n = cut.node_count();
    check_budget(n)?;
    struct Search<'a, 'g> {
        cut: &'a CutGraph<'g>,
        best: Option<(i64, Vec<NodeId>)>,
        stack: Vec<NodeId>,
        visited: u32,
    }
    impl Search<'_, '_> {
        fn dfs(&mut self, u: NodeId, cost: i64) {
            if self.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
                return;
            }
            if u == self.cut.t {
                self.best = Some((cost, self.stack.clone()));
                return;
            }
            let mut edges = self.cut.edges(u).to_vec();
            edges.sort_by_key(|e| (e.weight, e.to));
            for e in edges {
                if self.visited & (1 << e.to) != 0 {
                    continue;
                }
                self.visited |= 1 << e.to;
                self.stack.push(e.to);
                self.dfs(e.to, cost + e.weight);
                self.stack.pop();
                self.visited &= !(1 << e.to);
            }
        }
    }
    let mut search = Search { cut, best: None, stack: vec![cut.s], visited: 1 << cut.s };
    search.dfs(cut.s, 0);
    Ok(search.best.map(|(_, nodes)| CyclePath::from_nodes(cut, Algorithm::Oracle, nodes)))
}

/// Minimum-cost cycle of the angular graph through the start vertex whose
/// verification passes and which crosses the critical line at most
/// `max_crossings` times (`None` for no limit).
///
/// Crossings count the closing seam at the start plus every arc whose
/// endpoint angles differ by `theta` or more, with the closing endpoint
/// taken at 2π. With `Some(1)` this is exactly the cut graph's search space.
pub fn brute_force_enclosing_cycle(g: &AngularGraph, max_crossings: Option<usize>) -> Result<Option<CyclePath>> {
    let n = g.vertex_count();
    check_budget(n)?;
    let angles = assign_angles(g)?;
    let s = g.start;
    let closing = g.closing();
    let theta = g.query.theta;
    let budget = max_crossings.map(|m| m.saturating_sub(1));

    struct Search<'a> {
        g: &'a AngularGraph,
        angles: Vec<f64>,
        s: VertexId,
        closing: VertexId,
        theta: f64,
        budget: Option<usize>,
        best: Option<CyclePath>,
        walk: Vec<VertexId>,
        steps: Vec<(ArcKind, i64)>,
        visited: u32,
    }
    impl Search<'_> {
        fn target_angle(&self, v: VertexId) -> f64 {
            if v == self.closing {
                TAU
            } else {
                self.angles[v]
            }
        }

        fn dfs(&mut self, u: VertexId, cost: i64, crossed: usize) {
            if self.best.as_ref().is_some_and(|b| cost >= b.d) {
                return;
            }
            let mut nbrs: Vec<(i64, VertexId, ArcKind)> =
                self.g.neighbors(u).iter().map(|&(v, i)| (self.g.arcs[i].weight, v, self.g.arcs[i].kind)).collect();
            nbrs.sort_unstable_by_key(|&(w, v, _)| (w, v));
            for (w, v, kind) in nbrs {
                let closes = v == self.closing && self.walk.len() >= 2;
                if self.visited & (1 << v) != 0 && !closes {
                    continue;
                }
                if v == self.closing && !closes {
                    continue;
                }
                let from = if u == self.s { 0.0 } else { self.angles[u] };
                let crossing = (from - self.target_angle(v)).abs() >= self.theta;
                let crossed = crossed + usize::from(crossing);
                if self.budget.is_some_and(|b| crossed > b) {
                    continue;
                }
                self.walk.push(v);
                self.steps.push((kind, w));
                if closes {
                    self.consider(cost + w);
                } else {
                    self.visited |= 1 << v;
                    self.dfs(v, cost + w, crossed);
                    self.visited &= !(1 << v);
                }
                self.walk.pop();
                self.steps.pop();
            }
        }

        fn consider(&mut self, cost: i64) {
            if self.best.as_ref().is_some_and(|b| cost >= b.d) {
                return;
            }
            let candidate =
                CyclePath::from_walk(self.g, Algorithm::Oracle, self.walk.clone(), self.walk.clone(), &self.steps);
            if verify_cycle(&candidate, &self.g.query).is_ok_and(|r| r.passed()) {
                self.best = Some(candidate);
            }
        }
    }

    let mut search =
        Search { g, angles, s, closing, theta, budget, best: None, walk: vec![s], steps: Vec::new(), visited: 1 << s };
    // A split start closes on its colocated partner, which may be reached
    // after a single interior vertex; an unsplit start closes on itself.
    if closing != s {
        search.walk.reserve(n);
    }
    search.dfs(s, 0, 0);
    Ok(search.best)
}
