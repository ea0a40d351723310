use std::collections::BTreeMap;

use crate::rdf::vocab::{codo, owl, rdf, rdfs, roc, xsd};
use crate::rdf::{Graph, Iri, Literal, Term, Triple};

use super::builtin::{FLAG_PROPERTY, INDICATOR_CODE, ORDINAL_MAXIMUM};
use super::{indicator_order, Category, IndicatorDefinition, OntologySchema, SchemaError, ValueKind};

fn push(g: &mut Graph, s: &Iri, p: &'static str, o: impl Into<Term>) {
    g.insert(Triple::new(s.clone(), Iri::from_static(p), o).expect("IRI subject"));
}

/// Writes the schema as OWL/RDFS triples. Indicator metadata travels on
/// the three ROC annotation properties.
pub fn serialize_schema(schema: &OntologySchema) -> Graph {
    let mut g = Graph::new();
    for (name, ns) in
        [("codo", codo::NS), ("owl", owl::NS), ("rdf", rdf::NS), ("rdfs", rdfs::NS), ("roc", roc::NS), ("xsd", xsd::NS)]
    {
        g.add_prefix(name, Iri::from_static(ns));
    }
    if let Some(o) = &schema.ontology_iri {
        push(&mut g, o, rdf::TYPE, Iri::from_static(owl::ONTOLOGY));
    }
    for (set, class) in [
        (&schema.classes, owl::CLASS),
        (&schema.object_properties, owl::OBJECT_PROPERTY),
        (&schema.data_properties, owl::DATATYPE_PROPERTY),
        (&schema.annotation_properties, owl::ANNOTATION_PROPERTY),
    ] {
        for iri in set {
            push(&mut g, iri, rdf::TYPE, Iri::from_static(class));
        }
    }
    for (relation, p) in [
        (&schema.subclass_of, rdfs::SUB_CLASS_OF),
        (&schema.subproperty_of, rdfs::SUB_PROPERTY_OF),
        (&schema.inverse_of, owl::INVERSE_OF),
    ] {
        for (a, b) in relation {
            push(&mut g, a, p, b.clone());
        }
    }
    for (map, p) in [(&schema.domains, rdfs::DOMAIN), (&schema.ranges, rdfs::RANGE)] {
        for (a, b) in map {
            push(&mut g, a, p, b.clone());
        }
    }
    for (iri, label) in &schema.labels {
        push(&mut g, iri, rdfs::LABEL, Literal::string(label.clone()));
    }
    for (category, iri) in &schema.category_properties {
        push(&mut g, iri, INDICATOR_CODE, Literal::string(category.letter().to_string()));
    }
    for ind in &schema.indicators {
        let p = &ind.property_iri;
        push(&mut g, p, INDICATOR_CODE, Literal::string(ind.code.clone()));
        if let Some(max) = ind.ordinal_max {
            push(&mut g, p, ORDINAL_MAXIMUM, Literal::integer(max.into()));
        }
        if let Some(flag) = &ind.flag_property {
            push(&mut g, p, FLAG_PROPERTY, flag.clone());
        }
    }
    g
}

/// Reads a schema back from its triple form. Fails on cyclic class or
/// property hierarchies and on malformed indicator annotations.
pub fn load_schema(graph: &Graph) -> Result<OntologySchema, SchemaError> {
    let mut s = OntologySchema::default();
    let mut codes: BTreeMap<Iri, String> = BTreeMap::new();
    let mut maxima: BTreeMap<Iri, u32> = BTreeMap::new();
    let mut flags: BTreeMap<Iri, Iri> = BTreeMap::new();

    for t in graph {
        // Schema statements are about named resources only.
        let Term::Iri(subject) = t.subject() else { continue };
        let object_iri = t.object().as_iri();
        let object_lit = t.object().as_literal();
        match (t.predicate().as_str(), object_iri) {
            (rdf::TYPE, Some(o)) => match o.as_str() {
                owl::ONTOLOGY => s.ontology_iri = Some(subject.clone()),
                owl::CLASS | rdfs::CLASS => {
                    s.classes.insert(subject.clone());
                }
                owl::OBJECT_PROPERTY => {
                    s.object_properties.insert(subject.clone());
                }
                owl::DATATYPE_PROPERTY => {
                    s.data_properties.insert(subject.clone());
                }
                owl::ANNOTATION_PROPERTY => {
                    s.annotation_properties.insert(subject.clone());
                }
                _ => {}
            },
            (rdfs::SUB_CLASS_OF, Some(o)) => {
                s.subclass_of.insert((subject.clone(), o.clone()));
            }
            (rdfs::SUB_PROPERTY_OF, Some(o)) => {
                s.subproperty_of.insert((subject.clone(), o.clone()));
            }
            (owl::INVERSE_OF, Some(o)) => {
                s.inverse_of.insert((subject.clone(), o.clone()));
            }
            // Graph iteration is sorted, so the first domain/range wins deterministically.
            (rdfs::DOMAIN, Some(o)) => {
                s.domains.entry(subject.clone()).or_insert_with(|| o.clone());
            }
            (rdfs::RANGE, Some(o)) => {
                s.ranges.entry(subject.clone()).or_insert_with(|| o.clone());
            }
            (FLAG_PROPERTY, Some(o)) => {
                flags.insert(subject.clone(), o.clone());
            }
            (rdfs::LABEL, None) => {
                if let Some(l) = object_lit {
                    s.labels.entry(subject.clone()).or_insert_with(|| l.lexical().to_owned());
                }
            }
            (INDICATOR_CODE, None) => {
                if let Some(l) = object_lit {
                    codes.insert(subject.clone(), l.lexical().to_owned());
                }
            }
            (ORDINAL_MAXIMUM, None) => {
                let max = object_lit.and_then(|l| l.lexical().parse::<u32>().ok()).ok_or_else(|| {
                    SchemaError::InvalidIndicator {
                        iri: subject.as_str().to_owned(),
                        reason: format!("ordinal maximum {} is not a non-negative integer", t.object()),
                    }
                })?;
                maxima.insert(subject.clone(), max);
            }
            _ => {}
        }
    }

    for (iri, code) in codes {
        if code.len() == 1 {
            if let Some(category) = code.chars().next().and_then(Category::from_letter) {
                s.category_properties.insert(category, iri);
                continue;
            }
        }
        let category =
            code.chars().next().and_then(Category::from_letter).ok_or_else(|| SchemaError::InvalidIndicator {
                iri: iri.as_str().to_owned(),
                reason: format!("indicator code {code:?} has no known category letter"),
            })?;
        let ordinal_max = maxima.remove(&iri);
        let value_kind = match (ordinal_max, s.ranges.get(&iri).map(Iri::as_str)) {
            (Some(_), _) => ValueKind::Ordinal,
            (None, Some(xsd::DECIMAL | xsd::DOUBLE)) => ValueKind::Monetary,
            (None, _) => ValueKind::Count,
        };
        let ind = IndicatorDefinition {
            code,
            category,
            label: s.labels.get(&iri).cloned().unwrap_or_default(),
            value_kind,
            ordinal_max,
            flag_property: flags.remove(&iri),
            property_iri: iri,
        };
        ind.check()?;
        s.indicators.push(ind);
    }
    if let Some(iri) = maxima.keys().chain(flags.keys()).next() {
        return Err(SchemaError::InvalidIndicator {
            iri: iri.as_str().to_owned(),
            reason: "indicator annotation without an indicator code".to_owned(),
        });
    }
    s.indicators.sort_by_key(|a| indicator_order(&a.code));
    s.check_acyclic()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::builtin_roc_schema;
    use crate::turtle::{parse, serialize, Syntax};

    #[test]
    fn builtin_round_trips_through_triples_and_turtle() {
        let schema = builtin_roc_schema();
        let graph = serialize_schema(&schema);
        assert_eq!(load_schema(&graph).unwrap(), schema);
        let text = serialize(&graph, Syntax::Turtle);
        let reparsed = parse(&text, Syntax::Turtle).unwrap();
        assert_eq!(load_schema(&reparsed).unwrap(), schema);
    }

    #[test]
    fn empty_graph_gives_empty_schema() {
        assert_eq!(load_schema(&Graph::new()).unwrap(), OntologySchema::default());
    }

    #[test]
    fn two_cycle_is_rejected() {
        let text = "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n<urn:p> rdfs:subPropertyOf <urn:q> .\n<urn:q> rdfs:subPropertyOf <urn:p> .\n";
        let g = parse(text, Syntax::Turtle).unwrap();
        assert!(matches!(load_schema(&g), Err(SchemaError::CyclicHierarchy(_))));
    }

    #[test]
    fn malformed_ordinal_maximum() {
        let text = format!("<urn:p> <{ORDINAL_MAXIMUM}> \"many\" .\n<urn:p> <{INDICATOR_CODE}> \"h9\" .\n");
        let g = parse(&text, Syntax::NTriples).unwrap();
        assert!(matches!(load_schema(&g), Err(SchemaError::InvalidIndicator { .. })));
    }
}
