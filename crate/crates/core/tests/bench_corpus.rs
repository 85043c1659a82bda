use std::fs;

use fixtrace_core::bench::{run_corpus, summarize, write_csv, BenchOptions};
use fixtrace_core::synth::{gen_comb, gen_star};
use fixtrace_core::Algorithm;

#[test]
fn corpus_of_traced_images() {
    let dir = tempfile::tempdir().unwrap();
    let instances =
        [gen_star(5, 22.0, 32.0, 2, 1).unwrap(), gen_star(7, 24.0, 34.0, 1, 2).unwrap(), gen_comb(3, 5).unwrap()];
    let mut lines = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let name = format!("img{i}.pgm");
        fs::write(dir.path().join(&name), inst.to_pgm().unwrap()).unwrap();
        lines.push(serde_json::to_string(&inst.query_record(&name)).unwrap());
    }
    lines.push(r#"{"image":"missing.pgm","fixation":[5,5],"interest":[9,9]}"#.to_string());
    let queries = dir.path().join("queries.jsonl");
    fs::write(&queries, lines.join("\n")).unwrap();

    let records = run_corpus(dir.path(), &queries, &BenchOptions::default()).unwrap();
    assert_eq!(records.len(), 4);
    assert!(records[3].error.is_some());
    for r in &records[..3] {
        assert!(r.error.is_none(), "{:?}", r.error);
        assert!(r.vertices > 0);
        assert!(r.dominance_holds());
        assert_eq!(r.results.len(), 4);
    }
    // Traced stars close with straight gaps, so every solver agrees.
    for r in &records[..2] {
        let d = r.cost(Algorithm::Alg1Dijkstra).unwrap();
        assert_eq!(r.cost(Algorithm::Baseline), Some(d));
        assert_eq!(r.cost(Algorithm::Alg2), Some(d));
    }

    let table = summarize(&records).unwrap();
    assert_eq!(table.errors, 1);
    let alg1 = table.row(Algorithm::Alg1Dijkstra).unwrap();
    assert_eq!(alg1.solved + alg1.no_path, 3);
    let mut csv = Vec::new();
    write_csv(&records, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 1 + 3 * 4 + 1);
}

#[test]
fn parallel_run_matches_sequential_order() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_star(6, 22.0, 32.0, 2, 9).unwrap();
    fs::write(dir.path().join("s.pgm"), inst.to_pgm().unwrap()).unwrap();
    let q = serde_json::to_string(&inst.query_record("s.pgm")).unwrap();
    let queries = dir.path().join("q.jsonl");
    fs::write(&queries, vec![q; 6].join("\n")).unwrap();
    let opts = BenchOptions { algorithms: vec![Algorithm::Alg1Dijkstra], ..Default::default() };
    let records = run_corpus(dir.path(), &queries, &opts).unwrap();
    let indices: Vec<usize> = records.iter().map(|r| r.query).collect();
    assert_eq!(indices, (0..6).collect::<Vec<_>>());
    assert!(records.windows(2).all(|w| w[0].cost(Algorithm::Alg1Dijkstra) == w[1].cost(Algorithm::Alg1Dijkstra)));
}
