//! Indexed in-memory triple store with rule-based materialization.
//!
//! Terms are interned to `u32` ids and every triple is kept in three
//! orderings (SPO, POS, OSP). Mutation happens in a load phase; evaluation
//! only needs `&Store`, so a loaded store can be shared behind an `Arc`.

mod reason;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write;
use std::ops::RangeInclusive;

use crate::rdf::{Graph, Iri, Term, Triple};
use crate::turtle::{parse, Syntax, SyntaxError};

pub use reason::materialize;

pub(crate) type Id = u32;
pub(crate) type Key = [Id; 3];

/// A triple pattern; `None` is a wildcard.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriplePattern {
    pub s: Option<Term>,
    pub p: Option<Term>,
    pub o: Option<Term>,
}

impl TriplePattern {
    pub fn new(s: Option<Term>, p: Option<Term>, o: Option<Term>) -> Self {
        TriplePattern { s, p, o }
    }

    pub fn matches(&self, t: &Triple) -> bool {
        self.s.as_ref().map_or(true, |s| s == t.subject())
            && self.p.as_ref().map_or(true, |p| p.as_iri() == Some(t.predicate()))
            && self.o.as_ref().map_or(true, |o| o == t.object())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StoreStats {
    pub asserted: usize,
    pub inferred: usize,
    pub distinct_subjects: usize,
    pub distinct_predicates: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    inferred: HashSet<Key>,
}

fn range(prefix: &[Id]) -> RangeInclusive<Key> {
    let mut lo = [0; 3];
    let mut hi = [Id::MAX; 3];
    lo[..prefix.len()].copy_from_slice(prefix);
    hi[..prefix.len()].copy_from_slice(prefix);
    lo..=hi
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(graph: &Graph) -> Self {
        let mut store = Store::new();
        store.insert_graph(graph);
        store
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub(crate) fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("fewer than 2^32 distinct terms");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    pub(crate) fn id_of(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    pub(crate) fn term(&self, id: Id) -> &Term {
        &self.terms[id as usize]
    }

    fn triple(&self, [s, p, o]: Key) -> Triple {
        let predicate = self.term(p).as_iri().expect("predicates are IRIs").clone();
        Triple::new(self.term(s).clone(), predicate, self.term(o).clone()).expect("stored triples are well formed")
    }

    /// Adds an asserted triple; `false` when it was already present.
    /// Asserting a previously inferred triple clears its inferred mark.
    pub fn insert(&mut self, triple: &Triple) -> bool {
        let key = [
            self.intern(triple.subject()),
            self.intern(&Term::Iri(triple.predicate().clone())),
            self.intern(triple.object()),
        ];
        let added = self.insert_key(key);
        if !added {
            self.inferred.remove(&key);
        }
        added
    }

    pub fn insert_graph(&mut self, graph: &Graph) -> usize {
        graph.iter().filter(|t| self.insert(t)).count()
    }

    pub(crate) fn insert_key(&mut self, [s, p, o]: Key) -> bool {
        if !self.spo.insert([s, p, o]) {
            return false;
        }
        self.pos.insert([p, o, s]);
        self.osp.insert([o, s, p]);
        true
    }

    pub(crate) fn insert_inferred(&mut self, key: Key) -> bool {
        let added = self.insert_key(key);
        if added {
            self.inferred.insert(key);
        }
        added
    }

    pub(crate) fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.spo.iter().copied()
    }

    /// Parses `text` and inserts every triple; returns how many were new.
    pub fn load(&mut self, text: &str, syntax: Syntax) -> Result<usize, SyntaxError> {
        let graph = parse(text, syntax)?;
        Ok(self.insert_graph(&graph))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        let ids = (
            self.id_of(triple.subject()),
            self.id_of(&Term::Iri(triple.predicate().clone())),
            self.id_of(triple.object()),
        );
        matches!(ids, (Some(s), Some(p), Some(o)) if self.spo.contains(&[s, p, o]))
    }

    pub fn is_inferred(&self, triple: &Triple) -> bool {
        let ids = (
            self.id_of(triple.subject()),
            self.id_of(&Term::Iri(triple.predicate().clone())),
            self.id_of(triple.object()),
        );
        matches!(ids, (Some(s), Some(p), Some(o)) if self.inferred.contains(&[s, p, o]))
    }

    /// Id-level lookup in SPO key order, using the index whose leading
    /// positions are all bound.
    pub(crate) fn match_ids(&self, s: Option<Id>, p: Option<Id>, o: Option<Id>) -> Box<dyn Iterator<Item = Key> + '_> {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => Box::new(self.spo.contains(&[s, p, o]).then_some([s, p, o]).into_iter()),
            (Some(s), Some(p), None) => Box::new(self.spo.range(range(&[s, p])).copied()),
            (Some(s), None, Some(o)) => Box::new(self.osp.range(range(&[o, s])).map(|&[o, s, p]| [s, p, o])),
            (Some(s), None, None) => Box::new(self.spo.range(range(&[s])).copied()),
            (None, Some(p), Some(o)) => Box::new(self.pos.range(range(&[p, o])).map(|&[p, o, s]| [s, p, o])),
            (None, Some(p), None) => Box::new(self.pos.range(range(&[p])).map(|&[p, o, s]| [s, p, o])),
            (None, None, Some(o)) => Box::new(self.osp.range(range(&[o])).map(|&[o, s, p]| [s, p, o])),
            (None, None, None) => Box::new(self.spo.iter().copied()),
        }
    }

    /// Triples matching `pattern`, ordered by `compare_terms` on (s, p, o).
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Triple> {
        let lookup = |t: &Option<Term>| match t {
            None => Ok(None),
            Some(t) => self.id_of(t).map(Some).ok_or(()),
        };
        let (Ok(s), Ok(p), Ok(o)) = (lookup(&pattern.s), lookup(&pattern.p), lookup(&pattern.o)) else {
            return Vec::new();
        };
        let mut out: Vec<Triple> = self.match_ids(s, p, o).map(|k| self.triple(k)).collect();
        out.sort();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&k| self.triple(k))
    }

    pub fn stats(&self) -> StoreStats {
        let mut subjects = 0;
        let mut last = None;
        for &[s, _, _] in &self.spo {
            if last != Some(s) {
                subjects += 1;
                last = Some(s);
            }
        }
        let mut predicates = 0;
        let mut last = None;
        for &[p, _, _] in &self.pos {
            if last != Some(p) {
                predicates += 1;
                last = Some(p);
            }
        }
        StoreStats {
            asserted: self.spo.len() - self.inferred.len(),
            inferred: self.inferred.len(),
            distinct_subjects: subjects,
            distinct_predicates: predicates,
        }
    }

    /// Distinct subjects with an `rdf:type` in `classes`.
    pub fn count_instances(&self, classes: &BTreeSet<Iri>) -> usize {
        let Some(type_id) = self.id_of(&Term::Iri(Iri::new(crate::rdf::vocab::rdf::TYPE).expect("valid"))) else {
            return 0;
        };
        let mut subjects = BTreeSet::new();
        for class in classes {
            if let Some(c) = self.id_of(&Term::Iri(class.clone())) {
                subjects.extend(self.match_ids(None, Some(type_id), Some(c)).map(|[s, _, _]| s));
            }
        }
        subjects.len()
    }

    pub fn to_graph(&self) -> Graph {
        self.iter().collect()
    }

    /// Deterministic N-Triples dump, sorted by `compare_terms`.
    pub fn dump(&self) -> String {
        self.dump_inner(false)
    }

    /// Like [`Store::dump`] with a `# inferred` comment after each
    /// materialized triple. Still parseable as N-Triples.
    pub fn dump_annotated(&self) -> String {
        self.dump_inner(true)
    }

    fn dump_inner(&self, annotate: bool) -> String {
        let mut keys: Vec<(Triple, bool)> =
            self.spo.iter().map(|&k| (self.triple(k), self.inferred.contains(&k))).collect();
        keys.sort();
        let mut out = String::new();
        for (t, inferred) in keys {
            if annotate && inferred {
                writeln!(out, "{t} # inferred").expect("writing to a String");
            } else {
                writeln!(out, "{t}").expect("writing to a String");
            }
        }
        out
    }
}
