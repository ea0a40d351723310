//! CSV sources to ROC triples through a declarative JSON mapping.

mod mapping;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::vocab::{rdf, rdfs, xsd};
use crate::rdf::{is_decimal_lexical, Graph, Iri, Literal, Term, Triple};

pub use mapping::{
    compile_mapping, Binding, Link, LinkDirection, MappingSpec, Template, Transform, DEFAULT_NULL_MARKERS,
};
pub use table::{parse_csv, Table};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("empty input: no header row")]
    EmptyInput,
    #[error("row {0} does not have as many cells as the header")]
    RaggedRow(usize),
    #[error("CSV error at row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("column {0:?} is bound more than once")]
    DuplicateBinding(String),
    #[error("bad template {template:?}: {reason}")]
    BadTemplate { template: String, reason: String },
    #[error("unknown transform {0:?}")]
    UnknownTransform(String),
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub rows_read: usize,
    /// Distinct triples in the produced graph.
    pub triples_emitted: usize,
    /// Distinct subject IRIs instantiated from the subject template.
    pub instances_created: usize,
    /// Cells skipped because they matched a null marker.
    pub skipped_cells: usize,
    /// `(row number, message)`; the header is row 1.
    pub errors: Vec<(usize, String)>,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows read: {}, triples: {}, instances: {}, null cells skipped: {}, errors: {}",
            self.rows_read,
            self.triples_emitted,
            self.instances_created,
            self.skipped_cells,
            self.errors.len()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Oxcgrt,
    Ecdc,
    Ilo,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::Oxcgrt, Source::Ecdc, Source::Ilo];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Oxcgrt => "oxcgrt",
            Source::Ecdc => "ecdc",
            Source::Ilo => "ilo",
        }
    }

    /// The bundled JSON mapping document.
    pub fn preset_document(self) -> &'static str {
        match self {
            Source::Oxcgrt => include_str!("../../assets/mappings/oxcgrt.json"),
            Source::Ecdc => include_str!("../../assets/mappings/ecdc.json"),
            Source::Ilo => include_str!("../../assets/mappings/ilo.json"),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Source::ALL
            .into_iter()
            .find(|src| src.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown source {s:?} (expected oxcgrt, ecdc or ilo)"))
    }
}

pub fn preset_mapping(source: Source) -> MappingSpec {
    compile_mapping(source.preset_document(), None).expect("bundled preset compiles")
}

/// Parses comma-separated `bytes` and applies the preset mapping of `source`.
pub fn ingest_preset(bytes: &[u8], source: Source) -> Result<(Graph, IngestReport), IngestError> {
    let table = parse_csv(bytes, b',', b'"')?;
    apply_mapping(&table, &preset_mapping(source))
}

/// Turns a cell into a literal of `datatype`, after the binding transform.
fn coerce(cell: &str, datatype: &Iri) -> Result<Literal, String> {
    let value = match datatype.as_str() {
        xsd::STRING => return Ok(Literal::string(cell)),
        _ => cell.trim(),
    };
    let lexical = match datatype.as_str() {
        // Some exports write whole numbers as "2.00".
        xsd::INTEGER => match value.split_once('.') {
            Some((int, frac)) if is_decimal_lexical(value) && frac.bytes().all(|b| b == b'0') && !int.is_empty() => {
                int.to_owned()
            }
            _ => value.to_owned(),
        },
        _ => value.to_owned(),
    };
    Literal::new(lexical, datatype.clone(), None).map_err(|_| match datatype.as_str() {
        xsd::DATE => format!("bad date {cell:?}"),
        xsd::INTEGER | xsd::DECIMAL | xsd::DOUBLE => format!("non-numeric cell {cell:?} for {datatype}"),
        _ => format!("cell {cell:?} is not a valid {datatype}"),
    })
}

fn is_null(binding_markers: &[String], cell: &str) -> bool {
    let trimmed = cell.trim();
    binding_markers.iter().any(|m| m == cell || m == trimmed)
}

/// Applies `spec` to every row. Per-row problems skip the offending cell
/// (or the row, when its subject cannot be built) and land in the report.
/// A template column absent from the table fails the whole table.
pub fn apply_mapping(table: &Table, spec: &MappingSpec) -> Result<(Graph, IngestReport), IngestError> {
    if let Some(missing) = spec.template_columns().find(|c| table.column_index(c).is_none()) {
        return Err(IngestError::UnknownColumn(missing.to_owned()));
    }

    let mut report = IngestReport::default();
    let mut graph = Graph::new();
    let rdf_type = Iri::from_static(rdf::TYPE);
    let label = Iri::from_static(rdfs::LABEL);

    let mut bindings = Vec::new();
    for b in &spec.bindings {
        match table.column_index(&b.column) {
            Some(i) => bindings.push((b, i)),
            None => report.errors.push((1, format!("column {:?} not in table; binding skipped", b.column))),
        }
    }

    // Template placeholders see the same transformed text as the bindings,
    // so "{Date}" yields an ISO date when Date is bound with a date transform.
    let cell_for = |row: &[String], column: &str| -> Result<String, String> {
        let i = table.column_index(column).expect("checked above");
        let raw = &row[i];
        if raw.trim().is_empty() {
            return Err(format!("empty value in column {column:?}"));
        }
        spec.transform_for(column).apply(raw)
    };

    let mut instances: BTreeSet<Iri> = BTreeSet::new();
    for (idx, row) in table.rows.iter().enumerate() {
        let row_no = idx + 2;
        report.rows_read += 1;

        let subject = match spec
            .subject_template
            .render(|c| cell_for(row, c))
            .and_then(|s| Iri::new(s).map_err(|e| e.to_string()))
        {
            Ok(s) => s,
            Err(e) => {
                report.errors.push((row_no, format!("cannot build subject: {e}")));
                continue;
            }
        };
        instances.insert(subject.clone());
        let emit = |g: &mut Graph, s: Term, p: &Iri, o: Term| {
            g.insert(Triple::new(s, p.clone(), o).expect("non-literal subject"));
        };

        for class in &spec.type_assertions {
            emit(&mut graph, subject.clone().into(), &rdf_type, class.clone().into());
        }

        for (b, i) in &bindings {
            let cell = &row[*i];
            if is_null(&b.null_markers, cell) {
                report.skipped_cells += 1;
                continue;
            }
            match b.transform.apply(cell).and_then(|v| coerce(&v, &b.datatype)) {
                Ok(lit) => emit(&mut graph, subject.clone().into(), &b.property, lit.into()),
                Err(e) => report.errors.push((row_no, format!("column {:?}: {e}", b.column))),
            }
        }

        for link in &spec.links {
            let node = match link
                .node_template
                .render(|c| cell_for(row, c))
                .and_then(|s| Iri::new(s).map_err(|e| e.to_string()))
            {
                Ok(n) => n,
                Err(e) => {
                    report.errors.push((row_no, format!("cannot build linked node: {e}")));
                    continue;
                }
            };
            match link.direction {
                LinkDirection::Incoming => {
                    emit(&mut graph, node.clone().into(), &link.property, subject.clone().into())
                }
                LinkDirection::Outgoing => {
                    emit(&mut graph, subject.clone().into(), &link.property, node.clone().into())
                }
            }
            for class in &link.node_types {
                emit(&mut graph, node.clone().into(), &rdf_type, class.clone().into());
            }
            if let Some(i) = link.node_label_column.as_deref().and_then(|c| table.column_index(c)) {
                let text = row[i].trim();
                if !text.is_empty() {
                    emit(&mut graph, node.into(), &label, Literal::string(text).into());
                }
            }
        }
    }
    report.instances_created = instances.len();
    report.triples_emitted = graph.len();
    Ok((graph, report))
}
