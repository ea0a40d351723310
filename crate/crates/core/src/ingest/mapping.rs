use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::rdf::vocab::{codo, rdf, rdfs, roc, xsd};
use crate::rdf::Iri;

use super::IngestError;

/// Cell rewrite applied before datatype coercion and template filling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Transform {
    #[default]
    None,
    Trim,
    /// `20200401` to `2020-04-01`.
    DateYyyymmddToIso,
    /// `01/04/2020` to `2020-04-01`.
    DateDdmmyyyyToIso,
}

impl FromStr for Transform {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Transform::None),
            "trim" => Ok(Transform::Trim),
            "date_yyyymmdd_to_iso" => Ok(Transform::DateYyyymmddToIso),
            "date_ddmmyyyy_to_iso" => Ok(Transform::DateDdmmyyyyToIso),
            other => Err(IngestError::UnknownTransform(other.to_owned())),
        }
    }
}

impl Transform {
    pub fn apply(self, cell: &str) -> Result<String, String> {
        match self {
            Transform::None => Ok(cell.to_owned()),
            Transform::Trim => Ok(cell.trim().to_owned()),
            Transform::DateYyyymmddToIso => {
                let c = cell.trim();
                if c.len() == 8 && c.bytes().all(|b| b.is_ascii_digit()) {
                    Ok(format!("{}-{}-{}", &c[..4], &c[4..6], &c[6..]))
                } else {
                    Err(format!("bad date {cell:?}, expected YYYYMMDD"))
                }
            }
            Transform::DateDdmmyyyyToIso => {
                let parts: Vec<&str> = cell.trim().split('/').collect();
                match parts.as_slice() {
                    [d, m, y]
                        if d.len() == 2
                            && m.len() == 2
                            && y.len() == 4
                            && parts.iter().all(|p| p.bytes().all(|b| b.is_ascii_digit())) =>
                    {
                        Ok(format!("{y}-{m}-{d}"))
                    }
                    _ => Err(format!("bad date {cell:?}, expected DD/MM/YYYY")),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Part {
    Text(String),
    Column(String),
}

/// A string with `{column}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    raw: String,
    parts: Vec<Part>,
}

impl Template {
    pub fn parse(raw: &str) -> Result<Template, IngestError> {
        let bad = |why: &str| IngestError::BadTemplate { template: raw.to_owned(), reason: why.to_owned() };
        let mut parts = Vec::new();
        let mut text = String::new();
        let mut chars = raw.chars();
        while let Some(c) = chars.next() {
            match c {
                '{' => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some('{') => return Err(bad("nested '{'")),
                            Some(c) => name.push(c),
                            None => return Err(bad("unclosed '{'")),
                        }
                    }
                    if name.is_empty() {
                        return Err(bad("empty placeholder"));
                    }
                    if !text.is_empty() {
                        parts.push(Part::Text(std::mem::take(&mut text)));
                    }
                    parts.push(Part::Column(name));
                }
                '}' => return Err(bad("unmatched '}'")),
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            parts.push(Part::Text(text));
        }
        Ok(Template { raw: raw.to_owned(), parts })
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p {
            Part::Column(c) => Some(c.as_str()),
            Part::Text(_) => None,
        })
    }

    /// Fills placeholders; `value` returns the already-transformed cell text.
    /// Cell text is percent-encoded so the result stays a valid IRI.
    pub(crate) fn render(&self, mut value: impl FnMut(&str) -> Result<String, String>) -> Result<String, String> {
        const ENCODE: &percent_encoding::AsciiSet =
            &percent_encoding::NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');
        let mut out = String::new();
        for part in &self.parts {
            match part {
                Part::Text(t) => out.push_str(t),
                Part::Column(c) => {
                    let v = value(c)?;
                    out.extend(percent_encoding::utf8_percent_encode(&v, ENCODE));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub column: String,
    pub property: Iri,
    pub datatype: Iri,
    pub null_markers: Vec<String>,
    pub transform: Transform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkDirection {
    /// `(node, property, subject)`, e.g. country to its statistics.
    Incoming,
    /// `(subject, property, node)`.
    Outgoing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub property: Iri,
    pub node_template: Template,
    pub direction: LinkDirection,
    pub node_types: Vec<Iri>,
    pub node_label_column: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSpec {
    pub subject_template: Template,
    pub type_assertions: Vec<Iri>,
    pub bindings: Vec<Binding>,
    pub links: Vec<Link>,
}

impl MappingSpec {
    /// Every column the spec reads, in first-use order.
    pub fn columns(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        let all = self
            .subject_template
            .columns()
            .chain(self.bindings.iter().map(|b| b.column.as_str()))
            .chain(self.links.iter().flat_map(|l| l.node_template.columns().chain(l.node_label_column.as_deref())));
        all.filter(|c| seen.insert(*c)).collect()
    }

    /// Transform attached to `column` by its binding, used when the column
    /// also appears in a template.
    pub fn transform_for(&self, column: &str) -> Transform {
        self.bindings.iter().find(|b| b.column == column).map(|b| b.transform).unwrap_or_default()
    }

    pub(crate) fn template_columns(&self) -> impl Iterator<Item = &str> {
        self.subject_template.columns().chain(self.links.iter().flat_map(|l| l.node_template.columns()))
    }
}

pub const DEFAULT_NULL_MARKERS: [&str; 2] = ["", "NA"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    subject_template: String,
    #[serde(default)]
    types: Vec<String>,
    #[serde(default)]
    bindings: Vec<BindingDoc>,
    #[serde(default)]
    links: Vec<LinkDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BindingDoc {
    column: String,
    property: String,
    #[serde(default = "default_datatype")]
    datatype: String,
    null_markers: Option<Vec<String>>,
    #[serde(default = "default_transform")]
    transform: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    property: String,
    node_template: String,
    #[serde(default = "default_direction")]
    direction: String,
    #[serde(default)]
    node_types: Vec<String>,
    node_label_column: Option<String>,
}

fn default_datatype() -> String {
    xsd::STRING.to_owned()
}

fn default_transform() -> String {
    "none".to_owned()
}

fn default_direction() -> String {
    "incoming".to_owned()
}

struct Resolver {
    prefixes: BTreeMap<String, String>,
}

impl Resolver {
    fn new(declared: BTreeMap<String, String>) -> Resolver {
        let mut prefixes: BTreeMap<String, String> =
            [("rdf", rdf::NS), ("rdfs", rdfs::NS), ("xsd", xsd::NS), ("roc", roc::NS), ("codo", codo::NS)]
                .into_iter()
                .map(|(k, v)| (k.to_owned(), v.to_owned()))
                .collect();
        prefixes.extend(declared);
        Resolver { prefixes }
    }

    /// Expands `prefix:local` when the prefix is declared, otherwise
    /// treats the text as an absolute IRI.
    fn iri(&self, text: &str) -> Result<Iri, IngestError> {
        let expanded = match text.split_once(':') {
            Some((prefix, local)) if !local.starts_with("//") => match self.prefixes.get(prefix) {
                Some(ns) => format!("{ns}{local}"),
                None => text.to_owned(),
            },
            _ => text.to_owned(),
        };
        Iri::new(expanded).map_err(|e| IngestError::InvalidMapping(e.to_string()))
    }
}

const SUPPORTED_DATATYPES: [&str; 6] = [xsd::STRING, xsd::INTEGER, xsd::DECIMAL, xsd::DOUBLE, xsd::DATE, xsd::BOOLEAN];

/// Parses and validates a JSON mapping document. When `header` is given,
/// every referenced column must exist in it.
pub fn compile_mapping(document: &str, header: Option<&[String]>) -> Result<MappingSpec, IngestError> {
    let doc: Document = serde_json::from_str(document).map_err(|e| IngestError::InvalidMapping(e.to_string()))?;
    let resolver = Resolver::new(doc.prefixes);

    let subject_template = Template::parse(&doc.subject_template)?;
    let type_assertions = doc.types.iter().map(|t| resolver.iri(t)).collect::<Result<Vec<_>, _>>()?;

    let mut seen = BTreeSet::new();
    let mut bindings = Vec::with_capacity(doc.bindings.len());
    for b in doc.bindings {
        if !seen.insert(b.column.clone()) {
            return Err(IngestError::DuplicateBinding(b.column));
        }
        let datatype = resolver.iri(&b.datatype)?;
        if !SUPPORTED_DATATYPES.contains(&datatype.as_str()) {
            return Err(IngestError::InvalidMapping(format!("unsupported datatype {datatype}")));
        }
        bindings.push(Binding {
            property: resolver.iri(&b.property)?,
            datatype,
            null_markers: b
                .null_markers
                .unwrap_or_else(|| DEFAULT_NULL_MARKERS.iter().map(|s| s.to_string()).collect()),
            transform: b.transform.parse()?,
            column: b.column,
        });
    }

    let mut links = Vec::with_capacity(doc.links.len());
    for l in doc.links {
        let direction = match l.direction.as_str() {
            "incoming" => LinkDirection::Incoming,
            "outgoing" => LinkDirection::Outgoing,
            other => return Err(IngestError::InvalidMapping(format!("unknown link direction {other:?}"))),
        };
        links.push(Link {
            property: resolver.iri(&l.property)?,
            node_template: Template::parse(&l.node_template)?,
            direction,
            node_types: l.node_types.iter().map(|t| resolver.iri(t)).collect::<Result<_, _>>()?,
            node_label_column: l.node_label_column,
        });
    }

    let spec = MappingSpec { subject_template, type_assertions, bindings, links };
    if let Some(header) = header {
        if let Some(missing) = spec.columns().into_iter().find(|c| !header.iter().any(|h| h == c)) {
            return Err(IngestError::UnknownColumn(missing.to_owned()));
        }
    }
    Ok(spec)
}
