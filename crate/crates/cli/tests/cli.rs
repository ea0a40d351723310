use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const ASSETS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/assets");

fn asset(rel: &str) -> PathBuf {
    Path::new(ASSETS).join(rel)
}

fn roc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roc"))
        .current_dir(dir)
        .env_remove("ROC_SCHEMA")
        .args(args)
        .output()
        .expect("spawn roc")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = roc(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn ingest(dir: &Path, source: &str, fixture: &str, out: &str) {
    let csv = asset(fixture);
    ok(dir, &["-q", "ingest", "--source", source, "--csv", csv.to_str().unwrap(), "--out", out]);
}

#[test]
fn no_arguments_prints_usage_and_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = roc(dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage:"));
}

#[test]
fn bad_flag_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(roc(dir.path(), &["stats", "--kbb", "x.nt"]).status.code(), Some(2));
    assert_eq!(roc(dir.path(), &["ingest", "--source", "who", "--csv", "a", "--out", "b"]).status.code(), Some(2));
}

#[test]
fn ingest_then_stats_counts_thirty_instances() {
    let dir = TempDir::new().unwrap();
    ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x10.csv", "kb.nt");
    let stats = ok(dir.path(), &["stats", "--kb", "kb.nt"]);
    let instances = stats.lines().find(|l| l.starts_with("instances")).unwrap();
    assert_eq!(instances.split_whitespace().nth(1), Some("30"), "{stats}");
}

#[test]
fn health_aggregates_csv_has_three_rows() {
    let dir = TempDir::new().unwrap();
    ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x30.csv", "kb.nt");
    let q = asset("queries/health_aggregates.rq");
    let csv = ok(dir.path(), &["query", "--kb", "kb.nt", "--query", q.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(csv, include_str!("../../core/tests/golden/health_aggregates.csv"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn malformed_query_exits_1() {
    let dir = TempDir::new().unwrap();
    ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x10.csv", "kb.nt");
    std::fs::write(dir.path().join("bad.rq"), "SELEC ?x WHERE { ?x ?p ?o }").unwrap();
    let out = roc(dir.path(), &["query", "--kb", "kb.nt", "--query", "bad.rq"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn validate_exit_code_follows_the_report() {
    let dir = TempDir::new().unwrap();
    ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x10.csv", "kb.nt");
    assert_eq!(roc(dir.path(), &["-q", "validate", "--kb", "kb.nt"]).status.code(), Some(0));

    let mut text = std::fs::read_to_string(dir.path().join("kb.nt")).unwrap();
    text.push_str(concat!(
        "<http://qurator-csi.de/data/covid/DEU-2020-04-01> ",
        "<http://qurator-csi.de/ontologies/covid/responses#h6_facial_coverings> ",
        "\"9\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n"
    ));
    std::fs::write(dir.path().join("bad.nt"), text).unwrap();
    let out = roc(dir.path(), &["-q", "validate", "--kb", "bad.nt", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("rule,subject,message\n"), "{stdout}");
    assert!(stdout.contains("ordinal-range"), "{stdout}");
}

#[test]
fn pipeline_is_byte_identical_across_runs() {
    let run = || {
        let dir = TempDir::new().unwrap();
        ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x30.csv", "kb.nt");
        ok(dir.path(), &["-q", "materialize", "--kb", "kb.nt", "--out", "inf.nt"]);
        let q = asset("queries/health_aggregates.rq");
        let json = ok(dir.path(), &["query", "--kb", "inf.nt", "--query", q.to_str().unwrap()]);
        (std::fs::read(dir.path().join("kb.nt")).unwrap(), std::fs::read(dir.path().join("inf.nt")).unwrap(), json)
    };
    assert_eq!(run(), run());
}

#[test]
fn manifest_records_checksums() {
    let dir = TempDir::new().unwrap();
    let csv = asset("fixtures/oxcgrt_3x10.csv");
    ok(
        dir.path(),
        &["-q", "--manifest", "ingest", "--source", "oxcgrt", "--csv", csv.to_str().unwrap(), "--out", "kb.nt"],
    );
    let m: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("kb.nt.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "ingest");
    assert_eq!(m["preset"], "oxcgrt");
    let kb = std::fs::read(dir.path().join("kb.nt")).unwrap();
    assert_eq!(m["outputs"][0]["bytes"], kb.len());
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["counts"]["asserted"], kb.iter().filter(|&&b| b == b'\n').count());

    ok(dir.path(), &["-q", "stats", "--kb", "kb.nt", "--manifest=s.json"]);
    assert!(dir.path().join("s.json").exists());
}

#[test]
fn competency_questions() {
    let dir = TempDir::new().unwrap();
    ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x30.csv", "o.nt");
    ingest(dir.path(), "ecdc", "fixtures/ecdc_3x30.csv", "e.nt");
    let mut kb = std::fs::read(dir.path().join("o.nt")).unwrap();
    kb.extend(std::fs::read(dir.path().join("e.nt")).unwrap());
    std::fs::write(dir.path().join("kb.nt"), kb).unwrap();

    let cq1 = ok(dir.path(), &["-q", "cq", "1", "--kb", "kb.nt", "--indicator", "h6", "--format", "csv"]);
    assert_eq!(
        cq1,
        "country\nhttp://qurator-csi.de/data/covid/country/DEU\nhttp://qurator-csi.de/data/covid/country/JOR\n"
    );

    let out =
        roc(dir.path(), &["-q", "cq", "3", "--kb", "kb.nt", "--country", "SWE", "--indicator", "h6", "--show-query"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("SELECT ?date ?value"));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2, "header and rule only");

    let cq5 = ok(
        dir.path(),
        &[
            "-q",
            "cq",
            "5",
            "--kb",
            "kb.nt",
            "--country",
            "DEU",
            "--indicator",
            "h2",
            "--max-lag",
            "4",
            "--mode",
            "raw",
            "--format",
            "csv",
        ],
    );
    assert_eq!(cq5.lines().count(), 6);

    let missing = roc(dir.path(), &["-q", "cq", "3", "--kb", "kb.nt", "--country", "XXX", "--indicator", "h6"]);
    assert_eq!(missing.status.code(), Some(1));
    let unknown = roc(dir.path(), &["-q", "cq", "1", "--kb", "kb.nt", "--indicator", "z9"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn schema_subcommand_writes_the_bundled_schema() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["-q", "schema", "--out", "roc.ttl"]);
    let written = std::fs::read_to_string(dir.path().join("roc.ttl")).unwrap();
    assert_eq!(written, include_str!("../../core/assets/roc-schema.ttl"));

    ingest(dir.path(), "oxcgrt", "fixtures/oxcgrt_3x10.csv", "kb.nt");
    ok(dir.path(), &["-q", "materialize", "--kb", "kb.nt", "--schema", "roc.ttl", "--out", "a.nt"]);
    ok(dir.path(), &["-q", "materialize", "--kb", "kb.nt", "--out", "b.nt"]);
    assert_eq!(std::fs::read(dir.path().join("a.nt")).unwrap(), std::fs::read(dir.path().join("b.nt")).unwrap());
}
