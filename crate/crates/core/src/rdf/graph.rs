use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::term::{BlankNode, Iri, Term, Triple};

/// A set of triples plus the prefix declarations that came with it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in `compare_terms` order on (subject, predicate, object).
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    pub fn add_prefix(&mut self, name: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(name.into(), namespace);
    }

    pub fn blank_nodes(&self) -> BTreeSet<&BlankNode> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            for term in [t.subject(), t.object()] {
                if let Term::BlankNode(b) = term {
                    out.insert(b);
                }
            }
        }
        out
    }

    /// RDF merge: blank nodes of `other` whose labels already occur here are
    /// renamed to fresh labels before insertion. Prefixes of `self` win.
    pub fn merge(&mut self, other: &Graph) {
        let mine: HashSet<String> = self.blank_nodes().into_iter().map(|b| b.label().to_owned()).collect();
        let theirs: HashSet<String> = other.blank_nodes().into_iter().map(|b| b.label().to_owned()).collect();
        let mut renames: HashMap<String, BlankNode> = HashMap::new();
        let mut counter = 0usize;
        for label in theirs.iter().filter(|l| mine.contains(*l)) {
            let fresh = loop {
                counter += 1;
                let candidate = format!("{label}_{counter}");
                if !mine.contains(&candidate) && !theirs.contains(&candidate) {
                    break candidate;
                }
            };
            renames.insert(label.clone(), BlankNode::new(fresh).expect("non-empty label"));
        }
        let rename = |term: &Term| match term {
            Term::BlankNode(b) => renames.get(b.label()).cloned().map_or_else(|| term.clone(), Term::BlankNode),
            other => other.clone(),
        };
        for t in &other.triples {
            let triple = Triple::new(rename(t.subject()), t.predicate().clone(), rename(t.object()))
                .expect("subject kind preserved by renaming");
            self.triples.insert(triple);
        }
        for (name, ns) in &other.prefixes {
            self.prefixes.entry(name.clone()).or_insert_with(|| ns.clone());
        }
    }

    /// Graph isomorphism up to blank-node renaming. Prefixes are ignored.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let ground = |g: &Graph| -> BTreeSet<Triple> {
            g.triples
                .iter()
                .filter(|t| !matches!(t.subject(), Term::BlankNode(_)) && !matches!(t.object(), Term::BlankNode(_)))
                .cloned()
                .collect()
        };
        if ground(self) != ground(other) {
            return false;
        }
        let left = refine_colors(self);
        let right = refine_colors(other);
        if left.len() != right.len() {
            return false;
        }
        let mut left_hist: HashMap<u64, usize> = HashMap::new();
        let mut right_hist: HashMap<u64, usize> = HashMap::new();
        for c in left.values() {
            *left_hist.entry(*c).or_default() += 1;
        }
        for c in right.values() {
            *right_hist.entry(*c).or_default() += 1;
        }
        if left_hist != right_hist {
            return false;
        }
        // Assign the rarest colours first to keep the search narrow.
        let mut order: Vec<&BlankNode> = left.keys().copied().collect();
        order.sort_by_key(|b| (left_hist[&left[b]], b.label().to_owned()));
        let bnode_triples: Vec<&Triple> = self
            .triples
            .iter()
            .filter(|t| matches!(t.subject(), Term::BlankNode(_)) || matches!(t.object(), Term::BlankNode(_)))
            .collect();
        let mut mapping: HashMap<&BlankNode, &BlankNode> = HashMap::new();
        let mut used: HashSet<&BlankNode> = HashSet::new();
        search(&order, 0, &left, &right, &bnode_triples, other, &mut mapping, &mut used)
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph { triples: iter.into_iter().collect(), prefixes: BTreeMap::new() }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter);
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Iterated neighbourhood hashing of blank nodes.
fn refine_colors(graph: &Graph) -> HashMap<&BlankNode, u64> {
    let mut colors: HashMap<&BlankNode, u64> = graph.blank_nodes().into_iter().map(|b| (b, 0u64)).collect();
    let mut classes = 1usize;
    for _ in 0..=colors.len() {
        let mut signatures: HashMap<&BlankNode, Vec<u64>> = HashMap::new();
        for t in &graph.triples {
            let describe = |term: &Term| match term {
                Term::BlankNode(b) => hash_of(&("b", colors[b])),
                other => hash_of(&("t", other)),
            };
            let p = hash_of(t.predicate());
            if let Term::BlankNode(b) = t.subject() {
                signatures.entry(b).or_default().push(hash_of(&(0u8, p, describe(t.object()))));
            }
            if let Term::BlankNode(b) = t.object() {
                signatures.entry(b).or_default().push(hash_of(&(1u8, p, describe(t.subject()))));
            }
        }
        let next: HashMap<&BlankNode, u64> = colors
            .iter()
            .map(|(b, old)| {
                let mut sig = signatures.remove(b).unwrap_or_default();
                sig.sort_unstable();
                (*b, hash_of(&(old, sig)))
            })
            .collect();
        let next_classes = next.values().collect::<HashSet<_>>().len();
        colors = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    colors
}

#[allow(clippy::too_many_arguments)]
fn search<'a>(
    order: &[&'a BlankNode],
    depth: usize,
    left: &HashMap<&'a BlankNode, u64>,
    right: &HashMap<&'a BlankNode, u64>,
    triples: &[&'a Triple],
    target: &'a Graph,
    mapping: &mut HashMap<&'a BlankNode, &'a BlankNode>,
    used: &mut HashSet<&'a BlankNode>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let node = order[depth];
    let color = left[node];
    let mut candidates: Vec<&&BlankNode> = right.iter().filter(|(_, c)| **c == color).map(|(b, _)| b).collect();
    candidates.sort();
    for candidate in candidates {
        if used.contains(*candidate) {
            continue;
        }
        mapping.insert(node, candidate);
        used.insert(candidate);
        if consistent(triples, mapping, target) && search(order, depth + 1, left, right, triples, target, mapping, used)
        {
            return true;
        }
        mapping.remove(node);
        used.remove(*candidate);
    }
    false
}

/// Every fully-mapped blank-node triple must exist in the target graph.
fn consistent(triples: &[&Triple], mapping: &HashMap<&BlankNode, &BlankNode>, target: &Graph) -> bool {
    let map = |term: &Term| -> Option<Term> {
        match term {
            Term::BlankNode(b) => mapping.get(b).map(|m| Term::BlankNode((*m).clone())),
            other => Some(other.clone()),
        }
    };
    triples.iter().all(|t| match (map(t.subject()), map(t.object())) {
        (Some(s), Some(o)) => {
            let mapped = Triple::new(s, t.predicate().clone(), o).expect("subject kind preserved");
            target.contains(&mapped)
        }
        _ => true,
    })
}
