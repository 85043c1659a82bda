//! Corpus runner and Table 1 style summaries.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular_graph::Query;
use crate::edgemap::{detect_edges, load_edge_map, load_grayscale, FragmentSet};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::path::Algorithm;
use crate::pipeline::{prepare_fragments, solve_fragments, AlgorithmRun, PipelineConfig, ALL_ALGORITHMS};
use crate::synth::SyntheticInstance;

pub use crate::synth::QueryRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub pipeline: PipelineConfig,
    pub algorithms: Vec<Algorithm>,
    /// Gradient threshold for grayscale inputs; `None` reads images as edge
    /// maps where any nonzero sample is an edgel.
    pub edge_threshold: Option<f64>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { pipeline: PipelineConfig::default(), algorithms: ALL_ALGORITHMS.to_vec(), edge_threshold: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub algorithm: Algorithm,
    /// Cost, or `None` when no path exists.
    pub d: Option<i64>,
    /// Seconds.
    pub t: f64,
    pub sweeps: Option<usize>,
    pub passes: Option<usize>,
}

impl From<&AlgorithmRun> for AlgorithmResult {
    fn from(run: &AlgorithmRun) -> Self {
        Self {
            algorithm: run.algorithm,
            d: run.cost(),
            t: run.seconds,
            sweeps: run.path.as_ref().and_then(|p| p.sweeps_used),
            passes: run.path.as_ref().and_then(|p| p.passes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub image: String,
    /// Line index in the queries file.
    pub query: usize,
    pub fixation: Point,
    pub interest: Point,
    pub vertices: usize,
    pub results: Vec<AlgorithmResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn result(&self, algorithm: Algorithm) -> Option<&AlgorithmResult> {
        self.results.iter().find(|r| r.algorithm == algorithm)
    }

    pub fn cost(&self, algorithm: Algorithm) -> Option<i64> {
        self.result(algorithm).and_then(|r| r.d)
    }

    /// `d_II <= d_I <= d_base`, checked only when all three found a path.
    pub fn dominance_holds(&self) -> bool {
        match (self.cost(Algorithm::Alg2), self.cost(Algorithm::Alg1Dijkstra), self.cost(Algorithm::Baseline)) {
            (Some(a2), Some(a1), Some(b)) => a2 <= a1 && a1 <= b,
            _ => true,
        }
    }

    fn failed(image: &str, index: usize, q: &QueryRecord, message: String) -> Self {
        Self {
            image: image.to_string(),
            query: index,
            fixation: q.fixation,
            interest: q.interest,
            vertices: 0,
            results: Vec::new(),
            error: Some(message),
        }
    }
}

/// Parses a JSON-lines queries file; blank lines are skipped.
pub fn parse_queries(text: &str) -> Result<Vec<QueryRecord>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).map_err(Error::from)).collect()
}

fn solve_record(set: &FragmentSet, index: usize, q: &QueryRecord, opts: &BenchOptions) -> BenchRecord {
    let query = Query { fixation: q.fixation, interest: q.interest, theta: opts.pipeline.theta };
    match solve_fragments(set, query, &opts.algorithms, &opts.pipeline) {
        Ok(out) => BenchRecord {
            image: q.image.clone(),
            query: index,
            fixation: q.fixation,
            interest: q.interest,
            vertices: out.graph.vertex_count(),
            results: out.runs.iter().map(AlgorithmResult::from).collect(),
            error: None,
        },
        Err(e) => BenchRecord::failed(&q.image, index, q, e.to_string()),
    }
}

fn load_fragments(path: &Path, opts: &BenchOptions) -> Result<FragmentSet> {
    let bytes = std::fs::read(path)?;
    let map = match opts.edge_threshold {
        Some(threshold) => detect_edges(&load_grayscale(&bytes)?, threshold)?,
        None => load_edge_map(&bytes)?,
    };
    prepare_fragments(&map, &opts.pipeline)
}

/// Runs every query against images under `dir`. Each image is read and
/// traced once; queries run in parallel while each query's solvers run in
/// sequence. An unreadable image turns its queries into error records.
pub fn run_queries(dir: &Path, queries: &[QueryRecord], opts: &BenchOptions) -> Vec<BenchRecord> {
    let mut names: Vec<&str> = queries.iter().map(|q| q.image.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    let sets: HashMap<&str, std::result::Result<FragmentSet, String>> = names
        .par_iter()
        .map(|&name| (name, load_fragments(&dir.join(name), opts).map_err(|e| e.to_string())))
        .collect();
    queries
        .par_iter()
        .enumerate()
        .map(|(i, q)| match &sets[q.image.as_str()] {
            Ok(set) => solve_record(set, i, q, opts),
            Err(e) => BenchRecord::failed(&q.image, i, q, e.clone()),
        })
        .collect()
}

/// Reads `queries_file` (JSON lines of `{image, fixation, interest}`) and
/// runs it against the images in `dir`.
pub fn run_corpus(dir: &Path, queries_file: &Path, opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    let queries = parse_queries(&std::fs::read_to_string(queries_file)?)?;
    Ok(run_queries(dir, &queries, opts))
}

/// Runs synthetic instances directly from their fragment sets.
pub fn run_instances(instances: &[SyntheticInstance], opts: &BenchOptions) -> Vec<BenchRecord> {
    instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let name = format!("{}-{}", inst.family, inst.seed);
            solve_record(&inst.fragments, i, &inst.query_record(&name), opts)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub max: f64,
    pub mean: f64,
    pub min: f64,
}

impl Stats {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Some(Self { max, mean, min })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub d: Option<Stats>,
    pub t: Option<Stats>,
    pub solved: usize,
    pub no_path: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsTable {
    pub records: usize,
    pub errors: usize,
    pub rows: Vec<AlgorithmSummary>,
}

impl StatsTable {
    pub fn row(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }
}

/// Max, mean and min of d and t per algorithm. Records without a path are
/// left out of the d columns and counted in `no_path`; error records are
/// counted and otherwise ignored.
pub fn summarize(records: &[BenchRecord]) -> Result<StatsTable> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no bench records to summarize".into()));
    }
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for r in records {
        for res in &r.results {
            if !algorithms.contains(&res.algorithm) {
                algorithms.push(res.algorithm);
            }
        }
    }
    let rows = algorithms
        .into_iter()
        .map(|algorithm| {
            let results: Vec<&AlgorithmResult> = records.iter().filter_map(|r| r.result(algorithm)).collect();
            let d: Vec<f64> = results.iter().filter_map(|r| r.d).map(|d| d as f64).collect();
            let t: Vec<f64> = results.iter().map(|r| r.t).collect();
            AlgorithmSummary {
                algorithm,
                d: Stats::of(&d),
                t: Stats::of(&t),
                solved: d.len(),
                no_path: results.len() - d.len(),
            }
        })
        .collect();
    Ok(StatsTable { records: records.len(), errors: records.iter().filter(|r| r.error.is_some()).count(), rows })
}

impl fmt::Display for StatsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8}",
            "algorithm", "max d", "mean d", "min d", "max t", "mean t", "min t", "no path"
        )?;
        let cell = |s: Option<Stats>, pick: fn(Stats) -> f64, prec: usize| {
            s.map_or_else(|| "-".to_string(), |s| format!("{:.*}", prec, pick(s)))
        };
        for row in &self.rows {
            writeln!(
                f,
                "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8}",
                row.algorithm.name(),
                cell(row.d, |s| s.max, 0),
                cell(row.d, |s| s.mean, 1),
                cell(row.d, |s| s.min, 0),
                cell(row.t, |s| s.max, 4),
                cell(row.t, |s| s.mean, 4),
                cell(row.t, |s| s.min, 4),
                row.no_path,
            )?;
        }
        write!(f, "{} records, {} errors", self.records, self.errors)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    image: &'a str,
    query: usize,
    fixation_x: f64,
    fixation_y: f64,
    interest_x: f64,
    interest_y: f64,
    vertices: usize,
    algorithm: &'a str,
    d: Option<i64>,
    t: Option<f64>,
    sweeps: Option<usize>,
    passes: Option<usize>,
    error: Option<&'a str>,
}

/// One CSV row per record and algorithm; error records get a single row
/// with an empty algorithm.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let base = CsvRow {
            image: &r.image,
            query: r.query,
            fixation_x: r.fixation.x,
            fixation_y: r.fixation.y,
            interest_x: r.interest.x,
            interest_y: r.interest.y,
            vertices: r.vertices,
            algorithm: "",
            d: None,
            t: None,
            sweeps: None,
            passes: None,
            error: r.error.as_deref(),
        };
        if r.results.is_empty() {
            w.serialize(&base).map_err(std::io::Error::from)?;
        }
        for res in &r.results {
            w.serialize(CsvRow {
                algorithm: res.algorithm.name(),
                d: res.d,
                t: Some(res.t),
                sweeps: res.sweeps,
                passes: res.passes,
                ..base
            })
            .map_err(std::io::Error::from)?;
        }
    }
    w.flush()?;
    Ok(())
}
