//! wasm-bindgen bindings behind `www/index.html`.
//!
//! A [`Session`] holds one materialized store. Every method returns a string
//! (JSON, CSV or Turtle) or an error message, so the page never has to
//! understand Rust types.

use std::str::FromStr;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use roc_core::cq::{self, OutcomeMode};
use roc_core::ingest::{ingest_preset, Source};
use roc_core::ontology::{builtin_roc_schema, OntologySchema};
use roc_core::rdf::Graph;
use roc_core::sparql::{evaluate, parse_query, serialize_results, ResultFormat};
use roc_core::store::{materialize, Store};
use roc_core::turtle::{parse, Syntax};

const SAMPLE_OXCGRT: &str = include_str!("../../core/assets/fixtures/oxcgrt_3x30.csv");
const SAMPLE_ECDC: &str = include_str!("../../core/assets/fixtures/ecdc_3x30.csv");

#[wasm_bindgen]
pub struct Session {
    schema: OntologySchema,
    graph: Graph,
    store: Store,
    asserted: usize,
}

#[wasm_bindgen]
impl Session {
    /// Empty KB with the bundled schema.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Session {
        Session { schema: builtin_roc_schema(), graph: Graph::new(), store: Store::new(), asserted: 0 }
    }

    /// The bundled three-country OxCGRT and ECDC fixtures.
    pub fn sample() -> Session {
        let mut s = Session::new();
        s.add_csv("oxcgrt", SAMPLE_OXCGRT).expect("bundled fixture ingests");
        s.add_csv("ecdc", SAMPLE_ECDC).expect("bundled fixture ingests");
        s
    }

    /// Ingests CSV text with a preset mapping; returns the ingest summary.
    #[wasm_bindgen(js_name = addCsv)]
    pub fn add_csv(&mut self, source: &str, csv: &str) -> Result<String, String> {
        let source = Source::from_str(source)?;
        let (graph, report) = ingest_preset(csv.as_bytes(), source).map_err(|e| e.to_string())?;
        self.graph.merge(&graph);
        self.rebuild();
        Ok(report.to_string())
    }

    /// Adds Turtle or N-Triples text.
    #[wasm_bindgen(js_name = addRdf)]
    pub fn add_rdf(&mut self, text: &str, ntriples: bool) -> Result<usize, String> {
        let syntax = if ntriples { Syntax::NTriples } else { Syntax::Turtle };
        let graph = parse(text, syntax).map_err(|e| e.to_string())?;
        let before = self.graph.len();
        self.graph.merge(&graph);
        self.rebuild();
        Ok(self.graph.len() - before)
    }

    /// Per-country health-system aggregates; the page's default query.
    #[wasm_bindgen(js_name = exampleQuery)]
    pub fn example_query() -> String {
        include_str!("../../core/assets/queries/health_aggregates.rq").to_owned()
    }

    pub fn asserted(&self) -> usize {
        self.asserted
    }

    pub fn total(&self) -> usize {
        self.store.len()
    }

    /// Runs SPARQL; `format` is `json` or `csv`.
    pub fn query(&self, sparql: &str, format: &str) -> Result<String, String> {
        let format = match format {
            "json" => ResultFormat::Json,
            "csv" => ResultFormat::Csv,
            other => return Err(format!("unknown format {other:?}")),
        };
        let q = parse_query(sparql).map_err(|e| e.to_string())?;
        Ok(serialize_results(&evaluate(&q, &self.store), format))
    }

    /// Runs of consecutive days at or above `level`, as a JSON array of
    /// `{start, end, days}`.
    pub fn episodes(&self, country: &str, indicator: &str, level: f64) -> Result<String, String> {
        let indicator = cq::resolve_indicator(&self.schema, indicator).map_err(|e| e.to_string())?;
        let series =
            cq::extract_series(&self.store, &cq::resolve_country(country), &indicator).map_err(|e| e.to_string())?;
        let rows: Vec<Value> = cq::cq3_run_lengths(&series, level)
            .iter()
            .map(|e| json!({ "start": e.start.to_string(), "end": e.end.to_string(), "days": e.days() }))
            .collect();
        Ok(Value::Array(rows).to_string())
    }

    /// Lagged correlation of a response against an outcome property, as
    /// `{mode, best_lag, lags: [{lag, overlap, r}]}`.
    pub fn correlation(
        &self,
        country: &str,
        indicator: &str,
        outcome: &str,
        max_lag: u32,
        mode: &str,
    ) -> Result<String, String> {
        let mode = OutcomeMode::from_str(mode)?;
        let country = cq::resolve_country(country);
        let indicator = cq::resolve_indicator(&self.schema, indicator).map_err(|e| e.to_string())?;
        let outcome = cq::resolve_indicator(&self.schema, outcome)
            .or_else(|_| roc_core::rdf::Iri::new(format!("{}{outcome}", roc_core::rdf::vocab::roc::NS)))
            .map_err(|e| e.to_string())?;
        let response = cq::extract_series(&self.store, &country, &indicator).map_err(|e| e.to_string())?;
        let outcome = cq::extract_series(&self.store, &country, &outcome).map_err(|e| e.to_string())?;
        let report =
            cq::cq5_lagged_correlation(&response, &mode.apply(&outcome), max_lag).map_err(|e| e.to_string())?;
        let lags: Vec<Value> =
            report.lags.iter().map(|l| json!({ "lag": l.lag, "overlap": l.overlap, "r": l.r })).collect();
        Ok(json!({ "mode": mode.to_string(), "best_lag": report.best_lag, "lags": lags }).to_string())
    }
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    fn rebuild(&mut self) {
        self.store = Store::from_graph(&self.graph);
        self.asserted = self.store.len();
        materialize(&mut self.store, &self.schema);
    }
}
