//! Closed-contour extraction around a fixation point.
//!
//! Edge pixels are traced into fragments, fragments become an angular graph
//! around the fixation, and the cheapest enclosing cycle through a chosen
//! interest pixel is found as a shortest path in a graph cut along the ray
//! from the fixation to that pixel.

pub mod angular_graph;
pub mod bench;
pub mod cut_graph;
pub mod edgemap;
pub mod error;
pub mod geometry;
pub mod path;
pub mod pipeline;
pub mod solvers;
pub mod synth;
pub mod verify;

pub use angular_graph::{build_graph, AngularGraph, ArcKind, GraphExport, Query, VertexId, DEFAULT_THETA};
pub use cut_graph::{build_cut_graph, replicate, CutGraph, NodeId, ReplicatedGraph, ReplicationRange, SearchGraph};
pub use edgemap::{extract_fragments, split_fragments, EdgeMap, Fragment, FragmentSet};
pub use error::{Error, Result};
pub use geometry::{Pixel, Point};
pub use path::{Algorithm, CyclePath, Segment};
pub use verify::{verify_cycle, VerificationReport};
