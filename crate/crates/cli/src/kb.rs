use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use roc_core::ontology::{builtin_roc_schema, load_schema, OntologySchema};
use roc_core::rdf::Graph;
use roc_core::store::Store;
use roc_core::turtle::{self, Syntax};

pub fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    turtle::parse(text, Syntax::from_path(path)).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_store(path: &Path) -> Result<Store> {
    Ok(Store::from_graph(&load_graph(path)?))
}

/// The schema at `path`, or the bundled one.
pub fn load_schema_from(path: Option<&Path>) -> Result<OntologySchema> {
    match path {
        None => Ok(builtin_roc_schema()),
        Some(p) => load_schema(&load_graph(p)?).with_context(|| format!("loading schema {}", p.display())),
    }
}

/// N-Triples for `.nt` paths, Turtle otherwise.
pub fn render_store(store: &Store, path: &Path, annotate: bool) -> String {
    match Syntax::from_path(path) {
        Syntax::NTriples if annotate => store.dump_annotated(),
        Syntax::NTriples => store.dump(),
        Syntax::Turtle => turtle::serialize(&store.to_graph(), Syntax::Turtle),
    }
}

pub fn write(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
