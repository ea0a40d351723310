use crate::rdf::vocab::{codo, roc, xsd};
use crate::rdf::Iri;

use super::{Category, IndicatorDefinition, OntologySchema, ValueKind};

/// Version of the OxCGRT codebook the ordinal maxima below were copied from.
pub const CODEBOOK_VERSION: &str = "OxCGRT codebook v2.x (2020 indicator set)";

/// Member counts published for ROC v1.0. The builtin schema implements the
/// enumerable core and does not reproduce these numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublishedCounts {
    pub classes: usize,
    pub object_properties: usize,
    pub data_properties: usize,
    pub annotation_properties: usize,
}

pub const PUBLISHED_COUNTS: PublishedCounts =
    PublishedCounts { classes: 27, object_properties: 10, data_properties: 42, annotation_properties: 3 };

struct IndicatorRow {
    code: &'static str,
    local: &'static str,
    label: &'static str,
    kind: ValueKind,
    ordinal_max: Option<u32>,
    flagged: bool,
}

const fn ordinal(
    code: &'static str,
    local: &'static str,
    label: &'static str,
    max: u32,
    flagged: bool,
) -> IndicatorRow {
    IndicatorRow { code, local, label, kind: ValueKind::Ordinal, ordinal_max: Some(max), flagged }
}

const fn amount(code: &'static str, local: &'static str, label: &'static str, kind: ValueKind) -> IndicatorRow {
    IndicatorRow { code, local, label, kind, ordinal_max: None, flagged: false }
}

/// Frozen indicator table. Ordinal maxima and flag presence follow the
/// codebook named in [`CODEBOOK_VERSION`].
const INDICATORS: &[IndicatorRow] = &[
    ordinal("c1", "c1_school_closing", "School closing", 3, true),
    ordinal("c2", "c2_workplace_closing", "Workplace closing", 3, true),
    ordinal("c3", "c3_cancel_public_events", "Cancel public events", 2, true),
    ordinal("c4", "c4_restrictions_on_gatherings", "Restrictions on gatherings", 4, true),
    ordinal("c5", "c5_close_public_transport", "Close public transport", 2, true),
    ordinal("c6", "c6_stay_at_home_requirements", "Stay at home requirements", 3, true),
    ordinal("c7", "c7_restrictions_on_internal_movement", "Restrictions on internal movement", 2, true),
    ordinal("c8", "c8_international_travel_controls", "International travel controls", 4, false),
    ordinal("e1", "e1_income_support", "Income support", 2, true),
    ordinal("e2", "e2_debt_contract_relief", "Debt/contract relief", 2, false),
    amount("e3", "e3_fiscal_measures", "Fiscal measures", ValueKind::Monetary),
    amount("e4", "e4_international_support", "International support", ValueKind::Monetary),
    ordinal("h1", "h1_public_information_campaigns", "Public information campaigns", 2, true),
    ordinal("h2", "h2_testing_policy", "Testing policy", 3, false),
    ordinal("h3", "h3_contact_tracing", "Contact tracing", 2, false),
    amount("h4", "h4_emergency_investment_in_healthcare", "Emergency investment in healthcare", ValueKind::Monetary),
    amount("h5", "h5_investment_in_vaccines", "Investment in vaccines", ValueKind::Monetary),
    ordinal("h6", "h6_facial_coverings", "Facial coverings", 4, true),
    // M1 is a free-text wildcard in the source data; modelled as a count so
    // that numeric placeholders remain loadable.
    amount("m1", "m1_wildcard", "Wildcard", ValueKind::Count),
];

const CATEGORIES: [(Category, &str, &str); 4] = [
    (Category::C, "containment_and_closure", "Containment and closure policies"),
    (Category::E, "economic_response", "Economic policies"),
    (Category::H, "health_systems", "Health system policies"),
    (Category::M, "miscellaneous", "Miscellaneous policies"),
];

/// (local name, range, domain class local name or CODO class, label)
const OTHER_DATA_PROPERTIES: &[(&str, &str, &str, &str)] = &[
    ("date", xsd::DATE, codo::COUNTRY_WISE_STATISTICS_CLASS, "Date"),
    ("period", xsd::STRING, "LabourMarketStatistics", "Reference period"),
    ("stringency_index", xsd::DECIMAL, "ResponseStatistics", "Stringency index"),
    ("government_response_index", xsd::DECIMAL, "ResponseStatistics", "Government response index"),
    ("containment_health_index", xsd::DECIMAL, "ResponseStatistics", "Containment and health index"),
    ("economic_support_index", xsd::DECIMAL, "ResponseStatistics", "Economic support index"),
    ("confirmed_cases", xsd::INTEGER, codo::COUNTRY_WISE_STATISTICS_CLASS, "Confirmed cases (cumulative)"),
    ("confirmed_deaths", xsd::INTEGER, codo::COUNTRY_WISE_STATISTICS_CLASS, "Confirmed deaths (cumulative)"),
    ("new_cases", xsd::INTEGER, "CaseStatistics", "New cases"),
    ("new_deaths", xsd::INTEGER, "CaseStatistics", "New deaths"),
    ("population", xsd::INTEGER, "CaseStatistics", "Population"),
    ("unemployment_rate", xsd::DECIMAL, "LabourMarketStatistics", "Unemployment rate"),
    ("labour_force_participation_rate", xsd::DECIMAL, "LabourMarketStatistics", "Labour force participation rate"),
];

pub(crate) const INDICATOR_CODE: &str = "http://qurator-csi.de/ontologies/covid/responses#indicatorCode";
pub(crate) const ORDINAL_MAXIMUM: &str = "http://qurator-csi.de/ontologies/covid/responses#ordinalMaximum";
pub(crate) const FLAG_PROPERTY: &str = "http://qurator-csi.de/ontologies/covid/responses#flagProperty";

fn roc_term(local: &str) -> Iri {
    Iri::new(format!("{}{local}", roc::NS)).expect("valid ROC local name")
}

fn class_ref(name: &str) -> Iri {
    if name.contains(':') {
        Iri::new(name).expect("valid class IRI")
    } else {
        roc_term(name)
    }
}

/// The ROC schema as shipped with this toolkit.
pub fn builtin_roc_schema() -> OntologySchema {
    let mut s = OntologySchema {
        ontology_iri: Some(Iri::from_static("http://qurator-csi.de/ontologies/covid/responses")),
        ..Default::default()
    };
    let country_wise = Iri::from_static(codo::COUNTRY_WISE_STATISTICS_CLASS);
    let response_stats = Iri::from_static(roc::RESPONSE_STATISTICS);
    let country = Iri::from_static(roc::COUNTRY);

    for (local, label) in [
        ("ResponseStatistics", "Response statistics"),
        ("CaseStatistics", "Case statistics"),
        ("LabourMarketStatistics", "Labour market statistics"),
    ] {
        let class = roc_term(local);
        s.classes.insert(class.clone());
        s.subclass_of.insert((class.clone(), country_wise.clone()));
        s.labels.insert(class, label.to_owned());
    }
    s.classes.insert(country.clone());
    s.labels.insert(country.clone(), "Country".to_owned());
    s.classes.insert(country_wise.clone());
    s.labels.insert(country_wise.clone(), "Country-wise statistics".to_owned());

    let link = Iri::from_static(codo::COUNTRY_WISE_STATISTICS);
    let link_inverse = roc_term("statisticsOfCountry");
    s.object_properties.insert(link.clone());
    s.object_properties.insert(link_inverse.clone());
    s.inverse_of.insert((link.clone(), link_inverse.clone()));
    s.domains.insert(link.clone(), country.clone());
    s.domains.insert(link_inverse.clone(), country_wise.clone());
    s.labels.insert(link, "country-wise statistics".to_owned());
    s.labels.insert(link_inverse, "statistics of country".to_owned());

    for iri in [INDICATOR_CODE, ORDINAL_MAXIMUM, FLAG_PROPERTY] {
        s.annotation_properties.insert(Iri::from_static(iri));
    }
    s.labels.insert(Iri::from_static(INDICATOR_CODE), "OxCGRT code".to_owned());
    s.labels.insert(Iri::from_static(ORDINAL_MAXIMUM), "ordinal maximum".to_owned());
    s.labels.insert(Iri::from_static(FLAG_PROPERTY), "flag property".to_owned());

    for (category, local, label) in CATEGORIES {
        let p = roc_term(local);
        s.data_properties.insert(p.clone());
        s.domains.insert(p.clone(), response_stats.clone());
        s.labels.insert(p.clone(), label.to_owned());
        s.category_properties.insert(category, p);
    }

    for row in INDICATORS {
        let p = roc_term(row.local);
        let category = Category::from_letter(row.code.chars().next().unwrap()).expect("known category");
        s.data_properties.insert(p.clone());
        s.subproperty_of.insert((p.clone(), s.category_properties[&category].clone()));
        s.domains.insert(p.clone(), response_stats.clone());
        let range = match row.kind {
            ValueKind::Monetary => xsd::DECIMAL,
            ValueKind::Ordinal | ValueKind::Count => xsd::INTEGER,
        };
        s.ranges.insert(p.clone(), Iri::from_static(range));
        s.labels.insert(p.clone(), row.label.to_owned());
        let flag_property = row.flagged.then(|| {
            let flag = roc_term(&format!("{}_flag", row.code));
            s.data_properties.insert(flag.clone());
            s.domains.insert(flag.clone(), response_stats.clone());
            s.ranges.insert(flag.clone(), Iri::from_static(xsd::INTEGER));
            s.labels.insert(flag.clone(), format!("{} flag", row.code.to_ascii_uppercase()));
            flag
        });
        s.indicators.push(IndicatorDefinition {
            code: row.code.to_owned(),
            property_iri: p,
            category,
            label: row.label.to_owned(),
            value_kind: row.kind,
            ordinal_max: row.ordinal_max,
            flag_property,
        });
    }

    for (local, range, domain, label) in OTHER_DATA_PROPERTIES {
        let p = roc_term(local);
        s.data_properties.insert(p.clone());
        s.ranges.insert(p.clone(), Iri::new(*range).expect("valid datatype"));
        s.domains.insert(p.clone(), class_ref(domain));
        s.labels.insert(p, (*label).to_owned());
    }
    s
}
