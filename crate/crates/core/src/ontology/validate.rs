use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rust_decimal::Decimal;

use crate::rdf::vocab::{codo, rdf, roc, xsd};
use crate::rdf::{numeric_value, Graph, Iri, Numeric, Term, Triple};

use super::OntologySchema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    OrdinalRange,
    NonNumeric,
    MissingType,
    DanglingLink,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::OrdinalRange => "ordinal-range",
            RuleId::NonNumeric => "non-numeric",
            RuleId::MissingType => "missing-type",
            RuleId::DanglingLink => "dangling-link",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub triple: Triple,
    pub rule: RuleId,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_conforming(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// Machine-readable rows: (rule id, subject, message).
    pub fn rows(&self) -> impl Iterator<Item = (&'static str, String, &str)> {
        self.violations.iter().map(|v| (v.rule.as_str(), v.triple.subject().to_string(), v.message.as_str()))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "[{}] {}: {}", v.rule, v.triple.subject(), v.message)?;
        }
        Ok(())
    }
}

fn is_numeric_datatype(iri: &Iri) -> bool {
    matches!(iri.as_str(), xsd::INTEGER | xsd::DECIMAL | xsd::DOUBLE)
}

fn in_ordinal_range(n: Numeric, max: u32) -> bool {
    let upper = Numeric::Decimal(Decimal::from(max));
    let zero = Numeric::Decimal(Decimal::ZERO);
    matches!(n.compare(zero), Some(std::cmp::Ordering::Greater | std::cmp::Ordering::Equal))
        && matches!(n.compare(upper), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal))
}

/// Checks an instance graph against the schema.
///
/// Type entailment for the missing-type rule follows `subclass_of` only:
/// indicator domains would otherwise make every subject conform trivially.
pub fn validate_graph(graph: &Graph, schema: &OntologySchema) -> ValidationReport {
    let response_types = schema.sub_classes_inclusive(&Iri::from_static(roc::RESPONSE_STATISTICS));
    let rdf_type = Iri::from_static(rdf::TYPE);
    let link = Iri::from_static(codo::COUNTRY_WISE_STATISTICS);

    let mut types: BTreeMap<&Term, BTreeSet<&Iri>> = BTreeMap::new();
    let mut subjects: BTreeSet<&Term> = BTreeSet::new();
    for t in graph {
        subjects.insert(t.subject());
        if t.predicate() == &rdf_type {
            if let Some(c) = t.object().as_iri() {
                types.entry(t.subject()).or_default().insert(c);
            }
        }
    }

    let mut violations = Vec::new();
    let mut missing_type_reported: BTreeSet<&Term> = BTreeSet::new();
    for t in graph {
        let p = t.predicate();
        let indicator = schema.indicator_for_property(p);

        let numeric_range = indicator.is_some() || schema.ranges.get(p).is_some_and(is_numeric_datatype);
        if numeric_range {
            let value = t.object().as_literal().and_then(|l| numeric_value(l).ok());
            match value {
                None => violations.push(Violation {
                    triple: t.clone(),
                    rule: RuleId::NonNumeric,
                    message: format!("non-numeric value {} on numeric property {}", t.object(), p),
                }),
                Some(n) => {
                    if let Some(max) = indicator.and_then(|i| i.ordinal_max) {
                        if !in_ordinal_range(n, max) {
                            violations.push(Violation {
                                triple: t.clone(),
                                rule: RuleId::OrdinalRange,
                                message: format!("ordinal out of range: {} not in [0, {max}]", t.object()),
                            });
                        }
                    }
                }
            }
        }

        if indicator.is_some() && !missing_type_reported.contains(t.subject()) {
            let typed = types.get(t.subject()).is_some_and(|cs| cs.iter().any(|c| response_types.contains(*c)));
            if !typed {
                missing_type_reported.insert(t.subject());
                violations.push(Violation {
                    triple: t.clone(),
                    rule: RuleId::MissingType,
                    message: format!("subject of {p} is not typed {}", Iri::from_static(roc::RESPONSE_STATISTICS)),
                });
            }
        }

        if p == &link {
            let dangling = match t.object() {
                Term::Literal(_) => true,
                o => !subjects.contains(o),
            };
            if dangling {
                violations.push(Violation {
                    triple: t.clone(),
                    rule: RuleId::DanglingLink,
                    message: format!("dangling {p} object {}", t.object()),
                });
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::builtin_roc_schema;
    use crate::rdf::Literal;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn roc_iri(local: &str) -> Iri {
        iri(&format!("{}{local}", roc::NS))
    }

    fn conforming() -> Graph {
        let s = iri("http://qurator-csi.de/data/covid/SWE-2020-04-01");
        let c = iri("http://qurator-csi.de/data/covid/country/SWE");
        let mut g = Graph::new();
        g.insert(Triple::new(s.clone(), iri(rdf::TYPE), iri(roc::RESPONSE_STATISTICS)).unwrap());
        g.insert(Triple::new(s.clone(), roc_iri("h6_facial_coverings"), Literal::integer(0)).unwrap());
        g.insert(
            Triple::new(
                s.clone(),
                roc_iri("h4_emergency_investment_in_healthcare"),
                Literal::new("1000.5", iri(xsd::DECIMAL), None).unwrap(),
            )
            .unwrap(),
        );
        g.insert(Triple::new(c.clone(), iri(codo::COUNTRY_WISE_STATISTICS), s).unwrap());
        g.insert(Triple::new(c, iri(rdf::TYPE), iri(roc::COUNTRY)).unwrap());
        g
    }

    #[test]
    fn conforming_graph_has_empty_report() {
        let report = validate_graph(&conforming(), &builtin_roc_schema());
        assert!(report.is_conforming(), "{report}");
    }

    #[test]
    fn ordinal_out_of_range() {
        let mut g = conforming();
        let s = iri("http://qurator-csi.de/data/covid/SWE-2020-04-01");
        g.insert(Triple::new(s, roc_iri("h6_facial_coverings"), Literal::integer(99)).unwrap());
        let report = validate_graph(&g, &builtin_roc_schema());
        assert_eq!(report.len(), 1);
        assert_eq!(report.violations[0].rule, RuleId::OrdinalRange);
        assert!(report.violations[0].message.contains("ordinal out of range"));
    }

    #[test]
    fn string_on_monetary_property() {
        let mut g = conforming();
        let s = iri("http://qurator-csi.de/data/covid/SWE-2020-04-01");
        g.insert(Triple::new(s, roc_iri("h4_emergency_investment_in_healthcare"), Literal::string("high")).unwrap());
        let report = validate_graph(&g, &builtin_roc_schema());
        let rules: Vec<RuleId> = report.violations.iter().map(|v| v.rule).collect();
        assert_eq!(rules, [RuleId::NonNumeric]);
        assert!(report.violations[0].message.contains("non-numeric"));
    }

    #[test]
    fn missing_type_and_dangling_link() {
        let schema = builtin_roc_schema();
        let mut g = Graph::new();
        let s = iri("urn:x");
        g.insert(Triple::new(s.clone(), roc_iri("h2_testing_policy"), Literal::integer(1)).unwrap());
        g.insert(Triple::new(s.clone(), roc_iri("h3_contact_tracing"), Literal::integer(1)).unwrap());
        g.insert(Triple::new(iri("urn:c"), iri(codo::COUNTRY_WISE_STATISTICS), iri("urn:nowhere")).unwrap());
        let report = validate_graph(&g, &schema);
        let rules: Vec<RuleId> = report.violations.iter().map(|v| v.rule).collect();
        assert_eq!(rules, [RuleId::DanglingLink, RuleId::MissingType]);

        // A subclass of ResponseStatistics satisfies the type rule.
        let mut schema = schema;
        let sub = iri("urn:SpecialResponse");
        schema.subclass_of.insert((sub.clone(), iri(roc::RESPONSE_STATISTICS)));
        g.insert(Triple::new(s, iri(rdf::TYPE), sub).unwrap());
        let rules: Vec<RuleId> = validate_graph(&g, &schema).violations.iter().map(|v| v.rule).collect();
        assert_eq!(rules, [RuleId::DanglingLink]);
    }

    #[test]
    fn report_rows() {
        let mut g = conforming();
        g.insert(Triple::new(iri("urn:c"), iri(codo::COUNTRY_WISE_STATISTICS), Literal::integer(3)).unwrap());
        let report = validate_graph(&g, &builtin_roc_schema());
        let rows: Vec<_> = report.rows().collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].0, "dangling-link");
        assert_eq!(rows[0].1, "<urn:c>");
    }
}
