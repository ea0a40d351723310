use std::collections::HashMap;

use crate::ontology::OntologySchema;
use crate::rdf::vocab::rdf;
use crate::rdf::{Iri, Term};

use super::{Id, Key, Store};

/// Schema rules translated to term ids of one store.
struct Rules {
    rdf_type: Id,
    /// R1: direct super-properties.
    super_props: HashMap<Id, Vec<Id>>,
    /// R2: direct super-classes.
    super_classes: HashMap<Id, Vec<Id>>,
    /// R3: property domains.
    domains: HashMap<Id, Vec<Id>>,
    /// R4: inverses, both directions.
    inverses: HashMap<Id, Vec<Id>>,
}

impl Rules {
    fn compile(store: &mut Store, schema: &OntologySchema) -> Rules {
        let mut id = |iri: &Iri| store.intern(&Term::Iri(iri.clone()));
        let mut rules = Rules {
            rdf_type: id(&Iri::new(rdf::TYPE).expect("valid")),
            super_props: HashMap::new(),
            super_classes: HashMap::new(),
            domains: HashMap::new(),
            inverses: HashMap::new(),
        };
        for (a, b) in &schema.subproperty_of {
            rules.super_props.entry(id(a)).or_default().push(id(b));
        }
        for (a, b) in &schema.subclass_of {
            rules.super_classes.entry(id(a)).or_default().push(id(b));
        }
        for (p, c) in &schema.domains {
            rules.domains.entry(id(p)).or_default().push(id(c));
        }
        for (a, b) in &schema.inverse_of {
            let (a, b) = (id(a), id(b));
            rules.inverses.entry(a).or_default().push(b);
            if a != b {
                rules.inverses.entry(b).or_default().push(a);
            }
        }
        rules
    }

    /// Every rule has a single data premise, so consequences of one triple
    /// can be computed in isolation.
    fn consequences(&self, store: &Store, [s, p, o]: Key, out: &mut Vec<Key>) {
        if let Some(supers) = self.super_props.get(&p) {
            out.extend(supers.iter().map(|&q| [s, q, o]));
        }
        if p == self.rdf_type {
            if let Some(supers) = self.super_classes.get(&o) {
                out.extend(supers.iter().map(|&d| [s, self.rdf_type, d]));
            }
        }
        if let Some(classes) = self.domains.get(&p) {
            out.extend(classes.iter().map(|&c| [s, self.rdf_type, c]));
        }
        if let Some(inverses) = self.inverses.get(&p) {
            if !store.term(o).is_literal() {
                out.extend(inverses.iter().map(|&q| [o, q, s]));
            }
        }
    }
}

/// Forward-chains R1 (sub-property), R2 (sub-class), R3 (domain) and R4
/// (inverse, non-literal objects only) to a fixpoint. Returns the number of
/// newly inferred triples; a second call returns 0.
///
/// Semi-naive: each triple, asserted or derived, is expanded exactly once.
pub fn materialize(store: &mut Store, schema: &OntologySchema) -> usize {
    let rules = Rules::compile(store, schema);
    let mut worklist: Vec<Key> = store.keys().collect();
    let mut derived = Vec::new();
    let mut added = 0;
    while let Some(key) = worklist.pop() {
        derived.clear();
        rules.consequences(store, key, &mut derived);
        for &new in &derived {
            if store.insert_inferred(new) {
                added += 1;
                worklist.push(new);
            }
        }
    }
    added
}
