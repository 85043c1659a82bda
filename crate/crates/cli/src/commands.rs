use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fixtrace_core::bench::{run_corpus, summarize, write_csv, BenchOptions};
use fixtrace_core::edgemap::{detect_edges, load_edge_map, load_grayscale};
use fixtrace_core::pipeline::prepare_fragments;
use fixtrace_core::synth::{gen_comb, gen_eshape, gen_star, SyntheticInstance};
use fixtrace_core::{verify_cycle, CyclePath, EdgeMap, Point, Query, VerificationReport};
use serde::Serialize;

use crate::config::{AlgorithmChoice, ConfigArgs};
use crate::report::{check_points, solve, SolveReport, SolveStatus};
use crate::service::{self, ServiceConfig};
use crate::{overlay, read_file, write_file, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "fixtrace", version, about = "Closed contours around a fixation point from edge maps")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace an edge image into fragments.
    Trace {
        image: PathBuf,
        /// Treat the input as grayscale and detect edges at this gradient threshold.
        #[arg(long)]
        edge_threshold: Option<f64>,
        /// Write the fragments JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the contour through an interest point around a fixation point.
    Solve {
        image: PathBuf,
        #[arg(long, value_parser = parse_point)]
        fixation: Point,
        #[arg(long, value_parser = parse_point)]
        interest: Point,
        #[arg(long)]
        edge_threshold: Option<f64>,
        /// Accept a fixation point outside the image.
        #[arg(long)]
        allow_outside_fixation: bool,
        /// Draw the result into an .svg or .png file.
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
    /// Check solver output: closed, simple, enclosing, gaps under theta.
    Verify {
        /// A `solve --json` report or a single contour JSON.
        result: PathBuf,
        /// Fixation point; required for a bare contour, overrides a report's.
        #[arg(long, value_parser = parse_point)]
        fixation: Option<Point>,
    },
    /// Run every query of a corpus and summarize cost and time per solver.
    Bench {
        dir: PathBuf,
        /// JSON-lines queries file; defaults to DIR/queries.jsonl.
        #[arg(long)]
        queries: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        edge_threshold: Option<f64>,
    },
    /// Write a synthetic corpus of PGM images and a queries file.
    Generate {
        dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        stars: usize,
        #[arg(long, default_value_t = 5)]
        eshapes: usize,
        #[arg(long, default_value_t = 5)]
        combs: usize,
        /// Random clutter fragments added to every image.
        #[arg(long, default_value_t = 0)]
        clutter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Images kept in memory before the least recently used is dropped.
        #[arg(long, default_value_t = 64)]
        max_images: usize,
        #[arg(long, default_value_t = 16 * 1024 * 1024)]
        max_upload_bytes: usize,
        /// Allowed CORS origin; any origin when omitted.
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

pub fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad coordinate {v:?}: {e}"));
    let (x, y) = (parse(x)?, parse(y)?);
    if !x.is_finite() || !y.is_finite() {
        return Err(format!("coordinates must be finite, got {s:?}"));
    }
    Ok(Point::new(x, y))
}

/// Reads an image as an edge map, or detects edges when a threshold is given.
pub fn load_image(path: &Path, edge_threshold: Option<f64>) -> CliResult<EdgeMap> {
    let bytes = read_file(path)?;
    let map = match edge_threshold {
        Some(t) => load_grayscale(&bytes).and_then(|g| detect_edges(&g, t)),
        None => load_edge_map(&bytes),
    };
    map.map_err(|e| CliError::with_path(path, e))
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Invalid(e.to_string()))?;
    writeln!(out, "{text}").map_err(stdout_err)
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io { context: "stdout".into(), source: e }
}

/// Runs one parsed command, writing its output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Trace { image, edge_threshold, out: dest } => {
            let cfg = cli.config.resolve(AlgorithmChoice::default())?;
            trace(&image, edge_threshold, dest.as_deref(), cfg.pipeline(), cfg.json, out)
        }
        Command::Solve { image, fixation, interest, edge_threshold, allow_outside_fixation, overlay: dest } => {
            let cfg = cli.config.resolve(AlgorithmChoice::Alg2)?;
            let map = load_image(&image, edge_threshold)?;
            check_points(fixation, interest, (map.width(), map.height()), allow_outside_fixation)?;
            let set = prepare_fragments(&map, &cfg.pipeline()).map_err(|e| CliError::with_path(&image, e))?;
            let report = solve(&set, fixation, interest, &cfg)?;
            if let Some(dest) = dest {
                overlay::write(&dest, &map, &report)?;
            }
            if cfg.json {
                print_json(out, &report)?;
            } else {
                print_report(out, &report)?;
            }
            match report.status {
                SolveStatus::NoPath => Err(CliError::NoPath(format!("no contour through {}", report.start))),
                _ => Ok(()),
            }
        }
        Command::Verify { result, fixation } => {
            let cfg = cli.config.resolve(AlgorithmChoice::default())?;
            verify(&result, fixation, cfg.theta, cfg.json, out)
        }
        Command::Bench { dir, queries, csv, edge_threshold } => {
            let cfg = cli.config.resolve(AlgorithmChoice::All)?;
            let queries = queries.unwrap_or_else(|| dir.join("queries.jsonl"));
            let opts =
                BenchOptions { pipeline: cfg.pipeline(), algorithms: cfg.algorithm.algorithms(), edge_threshold };
            let records = run_corpus(&dir, &queries, &opts).map_err(|e| CliError::with_path(&queries, e))?;
            if let Some(csv) = csv {
                let file = std::fs::File::create(&csv).map_err(|e| CliError::io(&csv, e))?;
                write_csv(&records, file).map_err(|e| CliError::with_path(&csv, e))?;
            }
            if cfg.json {
                print_json(out, &records)
            } else if records.is_empty() {
                writeln!(out, "no queries").map_err(stdout_err)
            } else {
                writeln!(out, "{}", summarize(&records)?).map_err(stdout_err)
            }
        }
        Command::Generate { dir, stars, eshapes, combs, clutter, seed } => {
            let written = generate(&dir, stars, eshapes, combs, clutter, seed)?;
            writeln!(out, "wrote {written} images and queries.jsonl to {}", dir.display()).map_err(stdout_err)
        }
        Command::Serve { host, port, max_images, max_upload_bytes, cors_origin } => {
            let cfg = cli.config.resolve(AlgorithmChoice::Alg2)?;
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| CliError::Invalid(format!("bad listen address {host}:{port}: {e}")))?;
            let svc = ServiceConfig { run: cfg, max_images, max_upload_bytes, cors_origin };
            service::serve_blocking(addr, svc, out)
        }
    }
}

#[derive(Serialize)]
struct TraceSummary<'a> {
    width: usize,
    height: usize,
    edgel_count: usize,
    fragment_count: usize,
    vertex_count: usize,
    fragments: &'a fixtrace_core::FragmentSet,
}

fn trace(
    image: &Path,
    edge_threshold: Option<f64>,
    dest: Option<&Path>,
    pipeline: fixtrace_core::pipeline::PipelineConfig,
    json: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    let map = load_image(image, edge_threshold)?;
    let set = prepare_fragments(&map, &pipeline).map_err(|e| CliError::with_path(image, e))?;
    if let Some(dest) = dest {
        write_file(dest, set.to_json()?.as_bytes())?;
    }
    let summary = TraceSummary {
        width: map.width(),
        height: map.height(),
        edgel_count: map.edgel_count(),
        fragment_count: set.len(),
        vertex_count: 2 * set.len(),
        fragments: &set,
    };
    if json {
        return print_json(out, &summary);
    }
    writeln!(
        out,
        "{}x{} image, {} edgels, {} fragments, {} vertices",
        summary.width, summary.height, summary.edgel_count, summary.fragment_count, summary.vertex_count
    )
    .map_err(stdout_err)
}

fn print_report(out: &mut dyn Write, r: &SolveReport) -> CliResult<()> {
    let mut text = format!("{} vertices, {} fragments, start {}\n", r.vertex_count, r.fragment_count, r.start);
    for run in &r.runs {
        match (&run.path, &run.verification) {
            (Some(p), Some(v)) => text.push_str(&format!(
                "{:<14} d={:<8} t={:.4}s  {}\n",
                run.algorithm.name(),
                p.d,
                run.seconds,
                if v.passed() { "verified" } else { "REJECTED" }
            )),
            _ => text.push_str(&format!("{:<14} no path  t={:.4}s\n", run.algorithm.name(), run.seconds)),
        }
    }
    write!(out, "{text}").map_err(stdout_err)
}

#[derive(Serialize)]
struct VerifyEntry {
    algorithm: String,
    d: i64,
    report: VerificationReport,
}

fn verify(result: &Path, fixation: Option<Point>, theta: f64, json: bool, out: &mut dyn Write) -> CliResult<()> {
    let text = read_file(result)?;
    let (paths, query): (Vec<CyclePath>, Query) = if let Ok(report) = serde_json::from_slice::<SolveReport>(&text) {
        let mut query = report.query;
        if let Some(o) = fixation {
            query.fixation = o;
        }
        (report.runs.into_iter().filter_map(|r| r.path).collect(), query)
    } else {
        let path: CyclePath = serde_json::from_slice(&text).map_err(|e| {
            CliError::Invalid(format!("{}: neither a solve report nor a contour: {e}", result.display()))
        })?;
        let o = fixation.ok_or_else(|| CliError::Invalid("a bare contour needs --fixation".into()))?;
        let start = path.segments.first().map(|s| s.from.to_point()).unwrap_or(o);
        (vec![path], Query { fixation: o, interest: start, theta })
    };
    if paths.is_empty() {
        return Err(CliError::NoPath(format!("{} holds no contour", result.display())));
    }
    let mut entries = Vec::new();
    for p in &paths {
        let report = verify_cycle(p, &query).map_err(|e| CliError::with_path(result, e))?;
        entries.push(VerifyEntry { algorithm: p.algorithm.name().to_string(), d: p.d, report });
    }
    if json {
        print_json(out, &entries)?;
    } else {
        for e in &entries {
            let r = &e.report;
            writeln!(
                out,
                "{:<14} d={:<8} simple={} encloses={} theta_ok={} crossings={} max_gap_angle={:.4}",
                e.algorithm, e.d, r.is_simple, r.encloses, r.theta_ok, r.crossings, r.max_gap_angle
            )
            .map_err(stdout_err)?;
        }
    }
    let failed: Vec<&str> = entries.iter().filter(|e| !e.report.passed()).map(|e| e.algorithm.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Rejected(failed.join(", ")))
    }
}

/// Writes `images` PGMs and a matching `queries.jsonl` under `dir`.
pub fn generate(dir: &Path, stars: usize, eshapes: usize, combs: usize, clutter: usize, seed: u64) -> CliResult<usize> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut instances: Vec<SyntheticInstance> = Vec::new();
    for i in 0..stars as u64 {
        let s = seed + i;
        instances.push(gen_star(5 + (s % 4) as usize, 22.0, 34.0, 1 + (s % 3) as i64, s)?);
    }
    for i in 0..eshapes as u64 {
        instances.push(gen_eshape(seed + i)?);
    }
    for i in 0..combs as u64 {
        let s = seed + i;
        instances.push(gen_comb(3 + (s % 2) as usize, s)?);
    }
    let mut lines = String::new();
    for (i, inst) in instances.into_iter().enumerate() {
        let inst = if clutter > 0 { inst.with_clutter(clutter, seed + i as u64) } else { inst };
        let name = format!("{:03}-{}-{}.pgm", i, inst.family, inst.seed);
        write_file(&dir.join(&name), &inst.to_pgm()?)?;
        lines.push_str(&serde_json::to_string(&inst.query_record(&name)).expect("query record serializes"));
        lines.push('\n');
    }
    write_file(&dir.join("queries.jsonl"), lines.as_bytes())?;
    Ok(stars + eshapes + combs)
}
