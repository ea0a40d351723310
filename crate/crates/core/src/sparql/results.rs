use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::rdf::Term;

use super::SolutionTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResultFormat {
    #[default]
    Json,
    Csv,
}

impl ResultFormat {
    pub fn content_type(self) -> &'static str {
        match self {
            ResultFormat::Json => "application/sparql-results+json",
            ResultFormat::Csv => "text/csv; charset=utf-8",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ResultFormat::Json => "json",
            ResultFormat::Csv => "csv",
        }
    }
}

impl fmt::Display for ResultFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ResultFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ResultFormat::Json),
            "csv" => Ok(ResultFormat::Csv),
            other => Err(format!("unknown result format {other:?} (expected json or csv)")),
        }
    }
}

/// Serializes a solution table. Output is byte-for-byte deterministic:
/// JSON keys are sorted and CSV uses CRLF line ends.
pub fn serialize_results(table: &SolutionTable, format: ResultFormat) -> String {
    match format {
        ResultFormat::Json => to_json(table),
        ResultFormat::Csv => to_csv(table),
    }
}

fn binding(term: &Term) -> Value {
    let mut m: BTreeMap<&str, &str> = BTreeMap::new();
    match term {
        Term::Iri(i) => {
            m.insert("type", "uri");
            m.insert("value", i.as_str());
        }
        Term::BlankNode(b) => {
            m.insert("type", "bnode");
            m.insert("value", b.label());
        }
        Term::Literal(l) => {
            m.insert("type", "literal");
            m.insert("value", l.lexical());
            if let Some(lang) = l.lang() {
                m.insert("xml:lang", lang);
            } else if !l.is_string() {
                m.insert("datatype", l.datatype().as_str());
            }
        }
    }
    json!(m)
}

fn to_json(table: &SolutionTable) -> String {
    let bindings: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut m = Map::new();
            for (var, value) in table.variables.iter().zip(row) {
                if let Some(t) = value {
                    m.insert(var.clone(), binding(t));
                }
            }
            Value::Object(m)
        })
        .collect();
    let doc = json!({
        "head": { "vars": table.variables },
        "results": { "bindings": bindings },
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    out.push('\n');
    out
}

fn to_csv(table: &SolutionTable) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&table.variables).expect("writing to memory");
    for row in &table.rows {
        let cells = row.iter().map(|v| match v {
            None => String::new(),
            Some(Term::Iri(i)) => i.as_str().to_owned(),
            Some(Term::BlankNode(b)) => format!("_:{}", b.label()),
            Some(Term::Literal(l)) => l.lexical().to_owned(),
        });
        w.write_record(cells).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 input is UTF-8")
}
