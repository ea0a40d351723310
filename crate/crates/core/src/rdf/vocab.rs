//! IRIs of the vocabularies used throughout the toolkit.

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    pub const PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const SUB_PROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
    pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
}

pub mod owl {
    pub const NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const ONTOLOGY: &str = "http://www.w3.org/2002/07/owl#Ontology";
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
    pub const ANNOTATION_PROPERTY: &str = "http://www.w3.org/2002/07/owl#AnnotationProperty";
    pub const INVERSE_OF: &str = "http://www.w3.org/2002/07/owl#inverseOf";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
}

/// ROC schema namespace.
pub mod roc {
    pub const NS: &str = "http://qurator-csi.de/ontologies/covid/responses#";
    pub const RESPONSE_STATISTICS: &str = "http://qurator-csi.de/ontologies/covid/responses#ResponseStatistics";
    pub const COUNTRY: &str = "http://qurator-csi.de/ontologies/covid/responses#Country";
    pub const DATE: &str = "http://qurator-csi.de/ontologies/covid/responses#date";
}

/// The two CODO terms the ROC schema links into.
pub mod codo {
    pub const NS: &str = "http://www.isibang.ac.in/ns/codo#";
    pub const COUNTRY_WISE_STATISTICS_CLASS: &str = "http://www.isibang.ac.in/ns/codo#CountryWiseStatistics";
    pub const COUNTRY_WISE_STATISTICS: &str = "http://www.isibang.ac.in/ns/codo#countryWiseStatistics";
}

/// Namespace for instance data produced by the ingestion presets.
pub const DATA_NS: &str = "http://qurator-csi.de/data/covid/";
pub const COUNTRY_DATA_NS: &str = "http://qurator-csi.de/data/covid/country/";
