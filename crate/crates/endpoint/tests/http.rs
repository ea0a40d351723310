use std::sync::Arc;

use roc_core::ingest::{ingest_preset, Source};
use roc_core::store::Store;
use roc_endpoint::{Endpoint, EndpointConfig, Server};

const QUERY: &str = include_str!("../../core/assets/queries/health_aggregates.rq");
const GOLDEN_JSON: &str = include_str!("../../core/tests/golden/health_aggregates.json");
const GOLDEN_CSV: &str = include_str!("../../core/tests/golden/health_aggregates.csv");

fn start() -> (Server, Arc<Store>, String) {
    let (graph, _) =
        ingest_preset(include_bytes!("../../core/assets/fixtures/oxcgrt_3x30.csv"), Source::Oxcgrt).unwrap();
    let store = Arc::new(Store::from_graph(&graph));
    let config = EndpointConfig { bind: "127.0.0.1:0".into(), ..Default::default() };
    let server = Endpoint::new(Arc::clone(&store), config).unwrap().start().unwrap();
    let base = format!("http://{}", server.addr());
    (server, store, base)
}

fn body(r: Result<ureq::Response, ureq::Error>) -> (u16, String) {
    match r {
        Ok(r) => (r.status(), r.into_string().unwrap()),
        Err(ureq::Error::Status(code, r)) => (code, r.into_string().unwrap()),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn get_and_post_match_the_golden_body() {
    let (server, store, base) = start();
    let before = store.stats();
    let get = body(ureq::get(&format!("{base}/sparql")).query("query", QUERY).call());
    assert_eq!(get, (200, GOLDEN_JSON.to_owned()));
    let post =
        body(ureq::post(&format!("{base}/sparql")).set("Content-Type", "application/sparql-query").send_string(QUERY));
    assert_eq!(post, get);
    let form = body(ureq::post(&format!("{base}/sparql")).send_form(&[("query", QUERY)]));
    assert_eq!(form, get);
    let csv = body(ureq::get(&format!("{base}/sparql")).query("query", QUERY).set("Accept", "text/csv").call());
    assert_eq!(csv, (200, GOLDEN_CSV.to_owned()));
    assert_eq!(store.stats(), before);
    server.shutdown();
}

#[test]
fn errors_map_to_statuses() {
    let (server, _, base) = start();
    let (status, text) = body(ureq::get(&format!("{base}/sparql")).query("query", "SELEC ?s").call());
    assert_eq!(status, 400);
    assert!(text.contains("line 1, column 1"), "{text}");
    let (status, _) = body(ureq::post(&format!("{base}/sparql")).set("Content-Type", "text/plain").send_string(QUERY));
    assert_eq!(status, 415);
    let huge = format!("SELECT * WHERE {{ ?s ?p ?o }} #{}", "x".repeat(70_000));
    let (status, _) =
        body(ureq::post(&format!("{base}/sparql")).set("Content-Type", "application/sparql-query").send_string(&huge));
    assert_eq!(status, 413);
    assert_eq!(body(ureq::get(&format!("{base}/health")).call()), (200, "ok\n".to_owned()));
    server.shutdown();
}

#[test]
fn graph_dump_and_head() {
    let (server, store, base) = start();
    let r = ureq::get(&format!("{base}/graph")).call().unwrap();
    assert_eq!(r.content_type(), "application/n-triples");
    let text = r.into_string().unwrap();
    assert_eq!(text.lines().count(), store.len());
    assert_eq!(text, store.dump());
    let head = ureq::head(&format!("{base}/graph")).call().unwrap();
    assert_eq!(head.status(), 200);
    assert_eq!(head.into_string().unwrap(), "");
    server.shutdown();
}

#[test]
fn concurrent_requests_return_the_golden_body() {
    let (server, _, base) = start();
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let url = format!("{base}/sparql");
            std::thread::spawn(move || body(ureq::get(&url).query("query", QUERY).call()))
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), (200, GOLDEN_JSON.to_owned()));
    }
    server.shutdown();
}
