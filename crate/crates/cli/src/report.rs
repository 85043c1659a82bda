use fixtrace_core::pipeline::{solve_fragments, AlgorithmRun};
use fixtrace_core::{Algorithm, FragmentSet, Pixel, Point, Query};
use serde::{Deserialize, Serialize};

use crate::config::{validate_theta, RunConfig};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// Every requested solver found a contour.
    Ok,
    /// Some solvers found one.
    Partial,
    NoPath,
}

/// Result of one query, shared by the CLI's `--json` output and the
/// service's solve endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub query: Query,
    /// Edgel the interest point snapped to.
    pub start: Pixel,
    pub vertex_count: usize,
    pub fragment_count: usize,
    pub runs: Vec<AlgorithmRun>,
}

impl SolveReport {
    pub fn run(&self, algorithm: Algorithm) -> Option<&AlgorithmRun> {
        self.runs.iter().find(|r| r.algorithm == algorithm)
    }
}

/// Checks that points fall inside a `width` x `height` image; the fixation
/// may sit outside when `allow_outside_fixation` is set.
pub fn check_points(
    fixation: Point,
    interest: Point,
    (width, height): (usize, usize),
    allow_outside_fixation: bool,
) -> CliResult<()> {
    let inside = |p: Point| p.x >= 0.0 && p.y >= 0.0 && p.x < width as f64 && p.y < height as f64;
    if !inside(interest) {
        return Err(CliError::Invalid(format!("interest point {interest:?} lies outside the {width}x{height} image")));
    }
    if !allow_outside_fixation && !inside(fixation) {
        return Err(CliError::Invalid(format!("fixation point {fixation:?} lies outside the {width}x{height} image")));
    }
    Ok(())
}

/// Solves one query over a traced fragment set.
pub fn solve(
    set: &FragmentSet,
    fixation: Point,
    interest: Point,
    cfg: &RunConfig,
) -> fixtrace_core::Result<SolveReport> {
    let query = Query::new(fixation, interest, cfg.theta)?;
    let out = solve_fragments(set, query, &cfg.algorithm.algorithms(), &cfg.pipeline())?;
    let found = out.runs.iter().filter(|r| r.path.is_some()).count();
    let status = match found {
        0 => SolveStatus::NoPath,
        n if n == out.runs.len() => SolveStatus::Ok,
        _ => SolveStatus::Partial,
    };
    Ok(SolveReport {
        status,
        query: out.graph.query,
        start: out.graph.position(out.graph.start),
        vertex_count: out.graph.vertex_count(),
        fragment_count: set.len(),
        runs: out.runs,
    })
}

pub(crate) fn theta_or(theta: Option<f64>, cfg: &RunConfig) -> CliResult<RunConfig> {
    match theta {
        Some(t) => {
            validate_theta(t)?;
            Ok(RunConfig { theta: t, ..*cfg })
        }
        None => Ok(*cfg),
    }
}
