use std::path::Path;
use std::process::{Command, Output};

use fixtrace_cli::{SolveReport, SolveStatus};
use fixtrace_core::edgemap::encode_pgm;
use fixtrace_core::synth::{gen_comb, gen_star, SyntheticInstance};
use fixtrace_core::{Algorithm, CyclePath, EdgeMap, Pixel};

fn fixtrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixtrace")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_instance(dir: &Path, name: &str, inst: &SyntheticInstance) -> String {
    let path = dir.join(name);
    std::fs::write(&path, inst.to_pgm().unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn pt(p: fixtrace_core::Point) -> String {
    format!("{},{}", p.x, p.y)
}

fn solve_json(image: &str, inst: &SyntheticInstance, extra: &[&str]) -> (Output, Option<SolveReport>) {
    let (o, i) = (pt(inst.query.fixation), pt(inst.query.interest));
    let mut args = vec!["--json", "solve", image, "--fixation", &o, "--interest", &i];
    args.extend_from_slice(extra);
    let out = fixtrace(&args);
    let report = serde_json::from_slice(&out.stdout).ok();
    (out, report)
}

#[test]
fn theta_bounds_are_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_star(5, 20.0, 26.0, 1, 1).unwrap();
    let img = write_instance(dir.path(), "s.pgm", &inst);
    let (out, _) = solve_json(&img, &inst, &["--theta", "3.5"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta"));
    let (out, report) = solve_json(&img, &inst, &["--theta", &std::f64::consts::PI.to_string()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report.unwrap().status, SolveStatus::Ok);
}

#[test]
fn trace_counts_two_vertices_per_fragment() {
    let dir = tempfile::tempdir().unwrap();
    let star = gen_star(6, 22.0, 30.0, 2, 4).unwrap();
    let img = write_instance(dir.path(), "s.pgm", &star);
    let frags = dir.path().join("f.json");
    let out = fixtrace(&["--json", "trace", &img, "--out", frags.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let n = summary["fragment_count"].as_u64().unwrap();
    assert!(n > 0);
    assert_eq!(summary["vertex_count"].as_u64().unwrap(), 2 * n);
    let written: Vec<serde_json::Value> = serde_json::from_slice(&std::fs::read(&frags).unwrap()).unwrap();
    assert_eq!(written.len() as u64, n);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.pgm");
    let out = fixtrace(&["trace", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.pgm"));

    let blank = dir.path().join("blank.pgm");
    std::fs::write(&blank, encode_pgm(&EdgeMap::blank(20, 20).unwrap())).unwrap();
    let out = fixtrace(&["trace", blank.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("0 fragments"));

    let garbage = dir.path().join("junk.pgm");
    std::fs::write(&garbage, b"P5\n3 3\n255\nab").unwrap();
    assert_eq!(code(&fixtrace(&["trace", garbage.to_str().unwrap()])), 3);

    let line: Vec<Pixel> = (5..35).map(|x| Pixel::new(x, 10)).collect();
    let open = dir.path().join("line.pgm");
    std::fs::write(&open, encode_pgm(&EdgeMap::from_pixels(40, 40, &line).unwrap())).unwrap();
    let out = fixtrace(&["--json", "solve", open.to_str().unwrap(), "--fixation", "20,20", "--interest", "6,10"]);
    assert_eq!(code(&out), 2);
    let report: SolveReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.status, SolveStatus::NoPath);

    let out = fixtrace(&["solve", open.to_str().unwrap(), "--fixation", "20", "--interest", "6,10"]);
    assert_eq!(code(&out), 3);
    let out = fixtrace(&["solve", open.to_str().unwrap(), "--fixation", "20,20", "--interest", "60,10"]);
    assert_eq!(code(&out), 3);
    let out = fixtrace(&["solve", open.to_str().unwrap(), "--fixation", "34,10", "--interest", "6,10"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn star_all_identical_and_comb_separates() {
    let dir = tempfile::tempdir().unwrap();
    let star = gen_star(7, 24.0, 34.0, 2, 8).unwrap();
    let img = write_instance(dir.path(), "star.pgm", &star);
    let (out, report) = solve_json(&img, &star, &["--algorithm", "all"]);
    assert_eq!(code(&out), 0);
    let report = report.unwrap();
    let polys: Vec<_> = report.runs.iter().map(|r| r.path.as_ref().unwrap().polygon.clone()).collect();
    assert_eq!(polys.len(), 3);
    assert!(polys.windows(2).all(|w| w[0] == w[1]));

    let comb = gen_comb(4, 1).unwrap();
    let img = write_instance(dir.path(), "comb.pgm", &comb);
    let (out, report) = solve_json(&img, &comb, &["--algorithm", "all"]);
    assert_eq!(code(&out), 0);
    let report = report.unwrap();
    let d1 = report.run(Algorithm::Alg1Dijkstra).unwrap().cost().unwrap();
    let d2 = report.run(Algorithm::Alg2).unwrap().cost().unwrap();
    assert!(d2 < d1, "alg2 {d2} alg1 {d1}");
}

#[test]
fn verify_accepts_solver_output_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let comb = gen_comb(3, 4).unwrap();
    let img = write_instance(dir.path(), "comb.pgm", &comb);
    let overlay = dir.path().join("o.svg");
    let (out, report) = solve_json(&img, &comb, &["--algorithm", "all", "--overlay", overlay.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&overlay).unwrap().contains("<polygon"));
    let result = dir.path().join("r.json");
    std::fs::write(&result, &out.stdout).unwrap();
    let out = fixtrace(&["verify", result.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 3);

    let path: CyclePath = report.unwrap().run(Algorithm::Alg2).unwrap().path.clone().unwrap();
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, serde_json::to_vec(&path).unwrap()).unwrap();
    assert_eq!(code(&fixtrace(&["verify", bare.to_str().unwrap()])), 3);
    let o = pt(comb.query.fixation);
    assert_eq!(code(&fixtrace(&["verify", bare.to_str().unwrap(), "--fixation", &o])), 0);
    let far = "500,500";
    assert_eq!(code(&fixtrace(&["verify", bare.to_str().unwrap(), "--fixation", far])), 1);
}

#[test]
fn generate_then_bench() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let c = corpus.to_str().unwrap();
    let out =
        fixtrace(&["generate", c, "--stars", "3", "--eshapes", "1", "--combs", "2", "--clutter", "5", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let queries = std::fs::read_to_string(corpus.join("queries.jsonl")).unwrap();
    assert_eq!(queries.lines().count(), 6);

    let csv = dir.path().join("b.csv");
    let out = fixtrace(&["bench", c, "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for name in ["baseline", "alg1-dijkstra", "alg2"] {
        assert!(text.contains(name), "{text}");
    }
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 6 * 3);

    let out = fixtrace(&["--json", "bench", c, "--algorithm", "alg1-sweep"]);
    let records: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| r["results"].as_array().unwrap().len() == 1));
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().to_str().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_fixtrace"))
            .env("FIXTRACE_THREADS", threads)
            .args(["generate", c, "--stars", "1", "--eshapes", "0", "--combs", "0"])
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    assert_eq!(code(&run("zero")), 3);
}

#[test]
fn serve_on_an_occupied_port_fails() {
    let held = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = held.local_addr().unwrap().port().to_string();
    let out = fixtrace(&["serve", "--port", &port]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains(&port));
}
