use roc_core::ontology::{builtin_roc_schema, load_schema, serialize_schema, PUBLISHED_COUNTS};
use roc_core::turtle::{parse, serialize, Syntax};

const SCHEMA_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/assets/roc-schema.ttl");

/// Set `UPDATE_GOLDEN=1` to rewrite the bundled schema file.
#[test]
fn bundled_schema_file_is_current() {
    let text = serialize(&serialize_schema(&builtin_roc_schema()), Syntax::Turtle);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(SCHEMA_PATH, &text).unwrap();
    }
    assert_eq!(std::fs::read_to_string(SCHEMA_PATH).unwrap(), text);
}

#[test]
fn bundled_schema_file_loads_back() {
    let text = std::fs::read_to_string(SCHEMA_PATH).unwrap();
    let schema = load_schema(&parse(&text, Syntax::Turtle).unwrap()).unwrap();
    assert_eq!(schema, builtin_roc_schema());
    schema.check_indicators().unwrap();
}

#[test]
fn class_and_property_counts() {
    let schema = builtin_roc_schema();
    // The published ontology is larger than what this toolkit models; these
    // are the modeled subsets.
    assert!(schema.classes.len() <= PUBLISHED_COUNTS.classes);
    assert!(schema.object_properties.len() <= PUBLISHED_COUNTS.object_properties);
    assert_eq!(schema.annotation_properties.len(), PUBLISHED_COUNTS.annotation_properties);
    assert_eq!(schema.indicators.len(), 19);
}
