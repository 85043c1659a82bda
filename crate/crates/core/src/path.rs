//! Extracted contours as s→t walks plus their image-space polygon.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angular_graph::{AngularGraph, ArcKind, VertexId};
use crate::cut_graph::{NodeId, SearchGraph};
use crate::geometry::Pixel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Baseline,
    Alg1Dijkstra,
    Alg1Sweep,
    Alg2,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Baseline => "baseline",
            Self::Alg1Dijkstra => "alg1-dijkstra",
            Self::Alg1Sweep => "alg1-sweep",
            Self::Alg2 => "alg2",
            Self::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: ArcKind,
    pub from: Pixel,
    pub to: Pixel,
    pub w: i64,
    /// Original id of the traversed fragment, for fragment steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fragment: Option<usize>,
}

/// A closed contour through the start vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePath {
    pub algorithm: Algorithm,
    /// Total cost: sum of segment weights.
    pub d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweeps_used: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes: Option<usize>,
    /// Node ids in the search graph that produced the path.
    pub nodes: Vec<NodeId>,
    /// Angular-graph vertex ids, parallel to `nodes`.
    pub vertices: Vec<VertexId>,
    pub segments: Vec<Segment>,
    /// Contour with fragments expanded to their pixels and gaps bridged by
    /// straight segments; implicitly closed.
    pub polygon: Vec<Pixel>,
}

impl CyclePath {
    /// Assembles a path from a walk over angular-graph vertices. `kinds[i]`
    /// and `weights[i]` describe the step from `vertices[i]` to
    /// `vertices[i + 1]`.
    pub fn from_walk(
        g: &AngularGraph,
        algorithm: Algorithm,
        nodes: Vec<NodeId>,
        vertices: Vec<VertexId>,
        steps: &[(ArcKind, i64)],
    ) -> Self {
        debug_assert_eq!(steps.len() + 1, vertices.len());
        let mut segments = Vec::with_capacity(steps.len());
        let mut polygon = vec![g.position(vertices[0])];
        for (i, &(kind, w)) in steps.iter().enumerate() {
            let (a, b) = (vertices[i], vertices[i + 1]);
            let fragment = (kind == ArcKind::Fragment).then(|| g.fragment_ids[g.vertices[a].fragment]);
            segments.push(Segment { kind, from: g.position(a), to: g.position(b), w, fragment });
            match kind {
                ArcKind::Fragment => polygon.extend(g.fragment_pixels_from(a).into_iter().skip(1)),
                ArcKind::Gap => polygon.push(g.position(b)),
            }
        }
        if polygon.len() > 1 && polygon.first() == polygon.last() {
            polygon.pop();
        }
        let d = steps.iter().map(|&(_, w)| w).sum();
        Self { algorithm, d, sweeps_used: None, passes: None, nodes, vertices, segments, polygon }
    }

    /// Assembles a path from a node sequence of a search graph.
    ///
    /// # Panics
    /// If two consecutive nodes are not adjacent.
    pub fn from_nodes<G: SearchGraph + ?Sized>(sg: &G, algorithm: Algorithm, nodes: Vec<NodeId>) -> Self {
        let steps: Vec<(ArcKind, i64)> = nodes
            .windows(2)
            .map(|w| {
                let e = sg.edge(w[0], w[1]).unwrap_or_else(|| panic!("nodes {} and {} are not adjacent", w[0], w[1]));
                (e.kind, e.weight)
            })
            .collect();
        let vertices = nodes.iter().map(|&n| sg.vertex(n)).collect();
        Self::from_walk(sg.graph(), algorithm, nodes, vertices, &steps)
    }

    pub fn with_sweeps(mut self, sweeps: usize) -> Self {
        self.sweeps_used = Some(sweeps);
        self
    }

    pub fn with_passes(mut self, passes: usize) -> Self {
        self.passes = Some(passes);
        self
    }

    /// Vertex positions along the walk, start and end included.
    pub fn positions(&self) -> Vec<Pixel> {
        let mut out: Vec<Pixel> = self.segments.iter().map(|s| s.from).collect();
        if let Some(last) = self.segments.last() {
            out.push(last.to);
        }
        out
    }
}
