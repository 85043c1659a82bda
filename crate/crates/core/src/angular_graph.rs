//! The angularly ordered graph: fragment endpoints as vertices, zero-weight
//! arcs along fragments, squared-distance gap arcs between fragments, and
//! every arc whose visual angle from the fixation point reaches `theta`
//! removed.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::edgemap::{split_at_pixel, End, EndpointRef, FragmentSet};
use crate::error::{Error, Result};
use crate::geometry::{direction_angle, visual_angle, Pixel, Point};

pub type VertexId = usize;

pub const DEFAULT_THETA: f64 = FRAC_PI_2;

/// One extraction request: the point to enclose, the point the contour
/// must pass through, and the gap-angle bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub fixation: Point,
    pub interest: Point,
    pub theta: f64,
}

impl Query {
    pub fn new(fixation: Point, interest: Point, theta: f64) -> Result<Self> {
        let q = Self { fixation, interest, theta };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= PI) {
            return Err(Error::InvalidParameter(format!("theta must lie in (0, pi], got {}", self.theta)));
        }
        let finite = [self.fixation, self.interest].iter().all(|p| p.x.is_finite() && p.y.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("query points must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Fragment,
    Gap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub position: Pixel,
    /// Index into [`AngularGraph::fragments`].
    pub fragment: usize,
    pub end: End,
    pub mate: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: i64,
    pub kind: ArcKind,
}

/// Fragment endpoint graph for one query.
#[derive(Debug, Clone)]
pub struct AngularGraph {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<Arc>,
    /// Pixel chains, indexed by [`Vertex::fragment`].
    pub fragments: Vec<Vec<Pixel>>,
    /// Original fragment ids, parallel to `fragments`.
    pub fragment_ids: Vec<usize>,
    pub query: Query,
    /// Start vertex.
    pub start: VertexId,
    /// The two colocated endpoints created at the interest pixel. Equal when
    /// the interest pixel was already an endpoint.
    pub split_ends: (VertexId, VertexId),
    adjacency: Vec<Vec<(VertexId, usize)>>,
}

/// Nearest fragment pixel to `interest`; ties go to the smallest `(y, x)`.
pub fn snap_interest(set: &FragmentSet, interest: Point) -> Result<Pixel> {
    set.pixels()
        .map(|p| (p.to_point().dist2(interest), p.scan_key(), p))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, _, p)| p)
        .ok_or_else(|| Error::EmptyInput("no edgels to snap the interest point to".into()))
}

/// Snaps the interest point, splits its fragment, and builds the graph.
pub fn build_graph(set: &FragmentSet, query: Query) -> Result<AngularGraph> {
    query.validate()?;
    if set.is_empty() {
        return Err(Error::EmptyInput("fragment set is empty".into()));
    }
    let pixel = snap_interest(set, query.interest)?;
    let (split, left, right) = split_at_pixel(set, pixel)?;
    AngularGraph::from_fragments(&split, query, left, right)
}

impl AngularGraph {
    /// Builds the graph from an already split fragment set. `left` and
    /// `right` name the colocated endpoints at the interest pixel.
    pub fn from_fragments(set: &FragmentSet, query: Query, left: EndpointRef, right: EndpointRef) -> Result<Self> {
        query.validate()?;
        let mut vertices = Vec::with_capacity(set.len() * 2);
        let mut fragments = Vec::with_capacity(set.len());
        let mut fragment_ids = Vec::with_capacity(set.len());
        for (idx, frag) in set.fragments.iter().enumerate() {
            if frag.is_empty() {
                return Err(Error::InvalidParameter(format!("fragment {} is empty", frag.id)));
            }
            let head = vertices.len();
            for (end, position, mate) in [(End::Head, frag.head(), head + 1), (End::Tail, frag.tail(), head)] {
                if position.to_point() == query.fixation {
                    return Err(Error::DegenerateGeometry(format!(
                        "fixation point coincides with fragment endpoint {position}"
                    )));
                }
                vertices.push(Vertex { id: vertices.len(), position, fragment: idx, end, mate });
            }
            fragments.push(frag.pixels.clone());
            fragment_ids.push(frag.id);
        }
        let locate = |r: EndpointRef| -> Result<VertexId> {
            let idx = set
                .fragments
                .iter()
                .position(|f| f.id == r.fragment)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown fragment {}", r.fragment)))?;
            Ok(2 * idx + usize::from(r.end == End::Tail))
        };
        let split_ends = (locate(left)?, locate(right)?);

        let o = query.fixation;
        let mut arcs = Vec::new();
        for u in 0..vertices.len() {
            for v in u + 1..vertices.len() {
                let (a, b) = (vertices[u], vertices[v]);
                let angle = visual_angle(o, a.position.to_point(), b.position.to_point())?;
                if angle >= query.theta {
                    continue;
                }
                let (kind, weight) = if a.mate == v {
                    (ArcKind::Fragment, 0)
                } else if a.fragment == b.fragment {
                    // Both ends of a one-pixel fragment; only reachable through the mate arc.
                    continue;
                } else {
                    (ArcKind::Gap, a.position.dist2(b.position))
                };
                arcs.push(Arc { u, v, weight, kind });
            }
        }
        let mut graph = Self {
            vertices,
            arcs,
            fragments,
            fragment_ids,
            query,
            start: split_ends.0,
            split_ends,
            adjacency: Vec::new(),
        };
        graph.rebuild_adjacency();
        graph.start = graph.choose_start()?;
        Ok(graph)
    }

    fn rebuild_adjacency(&mut self) {
        let mut adjacency = vec![Vec::new(); self.vertices.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            adjacency[a.u].push((a.v, i));
            adjacency[a.v].push((a.u, i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        self.adjacency = adjacency;
    }

    /// Of the two colocated endpoints, the start is the one whose mate lies
    /// at the smaller angle measured from the critical line; ties go to the
    /// smaller fragment id.
    fn choose_start(&self) -> Result<VertexId> {
        let (l, r) = self.split_ends;
        if l == r {
            return Ok(l);
        }
        let o = self.query.fixation;
        let p = self.vertices[l].position.to_point();
        let key = |v: VertexId| -> Result<(f64, usize)> {
            let mate = self.vertices[self.vertices[v].mate].position.to_point();
            Ok((direction_angle(o, p, mate)?, self.fragment_ids[self.vertices[v].fragment]))
        };
        let (kl, kr) = (key(l)?, key(r)?);
        let left_first = kl.0 < kr.0 || (kl.0 == kr.0 && kl.1 <= kr.1);
        Ok(if left_first { l } else { r })
    }

    /// The colocated endpoint that is not the start (the start itself when
    /// the interest pixel was an endpoint already).
    pub fn closing(&self) -> VertexId {
        let (l, r) = self.split_ends;
        if self.start == l {
            r
        } else {
            l
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn position(&self, v: VertexId) -> Pixel {
        self.vertices[v].position
    }

    /// `(neighbor, arc index)` pairs, sorted by neighbor id.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adjacency[v]
    }

    pub fn arc_between(&self, u: VertexId, v: VertexId) -> Option<&Arc> {
        self.adjacency[u].iter().find(|(w, _)| *w == v).map(|&(_, i)| &self.arcs[i])
    }

    /// Pixel chain of a fragment oriented to start at vertex `from`.
    pub fn fragment_pixels_from(&self, from: VertexId) -> Vec<Pixel> {
        let vx = self.vertices[from];
        let chain = &self.fragments[vx.fragment];
        match vx.end {
            End::Head => chain.clone(),
            End::Tail => chain.iter().rev().copied().collect(),
        }
    }

    pub fn to_export(&self) -> GraphExport {
        GraphExport {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexExport {
                    id: v.id,
                    x: v.position.x,
                    y: v.position.y,
                    fragment: self.fragment_ids[v.fragment],
                    mate: v.mate,
                    angle: None,
                    copy_k: None,
                    replica_group: None,
                })
                .collect(),
            arcs: self.arcs.iter().map(|a| ArcExport { u: a.u, v: a.v, w: a.weight, kind: a.kind }).collect(),
            s: self.start,
            t: None,
            theta: self.query.theta,
            fixation: self.query.fixation,
        }
    }
}

/// JSON shape shared by every graph export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphExport {
    pub vertices: Vec<VertexExport>,
    pub arcs: Vec<ArcExport>,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub theta: f64,
    pub fixation: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexExport {
    pub id: usize,
    pub x: i64,
    pub y: i64,
    pub fragment: usize,
    pub mate: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_k: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replica_group: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcExport {
    pub u: usize,
    pub v: usize,
    pub w: i64,
    pub kind: ArcKind,
}
