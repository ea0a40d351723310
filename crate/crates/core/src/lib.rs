//! Knowledge-base toolkit for the ROC ontology of country responses to
//! COVID-19: RDF model, Turtle/N-Triples I/O, the ROC schema, declarative
//! CSV ingestion, an indexed triple store with rule-based materialization,
//! a SPARQL subset and competency-question analytics.

pub mod cq;
pub mod ingest;
pub mod ontology;
pub mod rdf;
pub mod sparql;
pub mod store;
pub mod turtle;
