//! RDF terms, triples and graphs.

mod graph;
mod numeric;
mod term;
pub mod vocab;

pub use graph::Graph;
pub use numeric::{numeric_value, Numeric};
pub use term::{compare_terms, make_iri, make_literal, BlankNode, Iri, Literal, RdfError, Term, Triple};
pub(crate) use term::{escape_string, is_decimal_lexical, is_integer_lexical};
