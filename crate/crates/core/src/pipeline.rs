//! End-to-end extraction: edge map to fragments to contours.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::angular_graph::{build_graph, AngularGraph, Query, DEFAULT_THETA};
use crate::cut_graph::{build_cut_graph, replicate, ReplicationRange, SearchGraph};
use crate::edgemap::{extract_fragments, split_fragments, EdgeMap, FragmentSet};
use crate::error::{Error, Result};
use crate::path::{Algorithm, CyclePath};
use crate::solvers::{solve_alg1_dijkstra, solve_alg1_sweep, solve_alg2_with, solve_baseline, Alg2Options};
use crate::verify::{verify_cycle, VerificationReport};

pub const DEFAULT_MAX_FRAGMENT_LENGTH: usize = 10;
pub const DEFAULT_MIN_FRAGMENT_LENGTH: usize = 5;

/// The solvers in the order they are usually reported.
pub const ALL_ALGORITHMS: [Algorithm; 4] =
    [Algorithm::Baseline, Algorithm::Alg1Dijkstra, Algorithm::Alg1Sweep, Algorithm::Alg2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub theta: f64,
    /// Fragments longer than this are cut into near-equal pieces; `None`
    /// keeps traced fragments whole.
    pub max_fragment_length: Option<usize>,
    pub min_fragment_length: usize,
    pub replication_range: ReplicationRange,
    pub alg2: Alg2Options,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
            max_fragment_length: Some(DEFAULT_MAX_FRAGMENT_LENGTH),
            min_fragment_length: DEFAULT_MIN_FRAGMENT_LENGTH,
            replication_range: ReplicationRange::Wide,
            alg2: Alg2Options::default(),
        }
    }
}

/// Traces an edge map and applies the configured length cap.
pub fn prepare_fragments(map: &EdgeMap, cfg: &PipelineConfig) -> Result<FragmentSet> {
    let set = extract_fragments(map, cfg.min_fragment_length)?;
    match cfg.max_fragment_length {
        Some(len) => split_fragments(&set, len),
        None => Ok(set),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub path: Option<CyclePath>,
    /// Wall time in seconds, from cut-graph construction to the finished
    /// path. Algorithm II includes its Algorithm I seed.
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

impl AlgorithmRun {
    pub fn cost(&self) -> Option<i64> {
        self.path.as_ref().map(|p| p.d)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub graph: AngularGraph,
    pub runs: Vec<AlgorithmRun>,
}

impl SolveOutcome {
    pub fn run(&self, algorithm: Algorithm) -> Option<&AlgorithmRun> {
        self.runs.iter().find(|r| r.algorithm == algorithm)
    }

    pub fn cost(&self, algorithm: Algorithm) -> Option<i64> {
        self.run(algorithm).and_then(AlgorithmRun::cost)
    }
}

/// Runs one solver on an already built angular graph.
pub fn run_algorithm(g: &AngularGraph, algorithm: Algorithm, cfg: &PipelineConfig) -> Result<AlgorithmRun> {
    let started = Instant::now();
    let cut = build_cut_graph(g)?;
    let path = match algorithm {
        Algorithm::Baseline => solve_baseline(&cut),
        Algorithm::Alg1Dijkstra => solve_alg1_dijkstra(&cut),
        Algorithm::Alg1Sweep => solve_alg1_sweep(&cut, cut.node_count() + 1),
        Algorithm::Alg2 => solve_alg1_dijkstra(&cut).map(|seed| {
            let tilde = replicate(&cut, cfg.replication_range);
            solve_alg2_with(&tilde, &seed, cfg.alg2)
        }),
        Algorithm::Oracle => return Err(Error::InvalidParameter("the oracle is not a pipeline solver".into())),
    };
    let seconds = started.elapsed().as_secs_f64();
    let verification = path.as_ref().map(|p| verify_cycle(p, &g.query)).transpose()?;
    Ok(AlgorithmRun { algorithm, path, seconds, verification })
}

/// Builds the angular graph for `query` and runs each requested solver.
pub fn solve_fragments(
    set: &FragmentSet,
    query: Query,
    algorithms: &[Algorithm],
    cfg: &PipelineConfig,
) -> Result<SolveOutcome> {
    let query = Query { theta: cfg.theta, ..query };
    let graph = build_graph(set, query)?;
    let runs = algorithms.iter().map(|&a| run_algorithm(&graph, a, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(SolveOutcome { graph, runs })
}

/// Traces `map` and solves.
pub fn solve_edge_map(
    map: &EdgeMap,
    query: Query,
    algorithms: &[Algorithm],
    cfg: &PipelineConfig,
) -> Result<SolveOutcome> {
    solve_fragments(&prepare_fragments(map, cfg)?, query, algorithms, cfg)
}
