//! The ROC schema: classes, the property hierarchy with one super-property
//! per OxCGRT coding category, indicator definitions with ordinal ranges,
//! and validation of instance graphs against it.

mod builtin;
mod io;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::Iri;

pub use builtin::{builtin_roc_schema, PublishedCounts, CODEBOOK_VERSION, PUBLISHED_COUNTS};
pub use io::{load_schema, serialize_schema};
pub use validate::{validate_graph, RuleId, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("cyclic hierarchy through <{0}>")]
    CyclicHierarchy(String),
    #[error("unknown property <{0}>")]
    UnknownProperty(String),
    #[error("invalid indicator definition for <{iri}>: {reason}")]
    InvalidIndicator { iri: String, reason: String },
}

/// OxCGRT coding category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    /// Containment and closure.
    C,
    /// Economic response.
    E,
    /// Health systems.
    H,
    /// Miscellaneous.
    M,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::C, Category::E, Category::H, Category::M];

    pub fn letter(self) -> char {
        match self {
            Category::C => 'C',
            Category::E => 'E',
            Category::H => 'H',
            Category::M => 'M',
        }
    }

    pub fn from_letter(c: char) -> Option<Category> {
        match c.to_ascii_uppercase() {
            'C' => Some(Category::C),
            'E' => Some(Category::E),
            'H' => Some(Category::H),
            'M' => Some(Category::M),
            _ => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueKind {
    /// Small integer scale `0..=ordinal_max`.
    Ordinal,
    /// Amount in USD.
    Monetary,
    /// Non-negative count without an upper bound.
    Count,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Ordinal => "ordinal",
            ValueKind::Monetary => "monetary",
            ValueKind::Count => "count",
        })
    }
}

impl FromStr for ValueKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ordinal" => Ok(ValueKind::Ordinal),
            "monetary" => Ok(ValueKind::Monetary),
            "count" => Ok(ValueKind::Count),
            other => Err(format!("unknown value kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorDefinition {
    /// Lower-case OxCGRT code such as `h2`.
    pub code: String,
    pub property_iri: Iri,
    pub category: Category,
    pub label: String,
    pub value_kind: ValueKind,
    pub ordinal_max: Option<u32>,
    pub flag_property: Option<Iri>,
}

impl IndicatorDefinition {
    pub fn has_flag(&self) -> bool {
        self.flag_property.is_some()
    }

    pub(crate) fn check(&self) -> Result<(), SchemaError> {
        let invalid = |reason: &str| SchemaError::InvalidIndicator {
            iri: self.property_iri.as_str().to_owned(),
            reason: reason.to_owned(),
        };
        let mut chars = self.code.chars();
        let letter_ok = chars.next().is_some_and(|c| matches!(c, 'c' | 'e' | 'h' | 'm'));
        let digits: String = chars.collect();
        if !letter_ok || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid("code must match ^[cehm][0-9]+$"));
        }
        if Category::from_letter(self.code.chars().next().unwrap()) != Some(self.category) {
            return Err(invalid("category does not match code letter"));
        }
        match (self.value_kind, self.ordinal_max) {
            (ValueKind::Ordinal, Some(max)) if max >= 1 => Ok(()),
            (ValueKind::Ordinal, _) => Err(invalid("ordinal indicator needs ordinal_max >= 1")),
            (_, Some(_)) => Err(invalid("only ordinal indicators carry ordinal_max")),
            (_, None) => Ok(()),
        }
    }
}

/// Sort key placing indicators in codebook order (c1..c8, e1.., h1.., m1).
pub(crate) fn indicator_order(code: &str) -> (char, u32) {
    let mut chars = code.chars();
    let letter = chars.next().unwrap_or('z');
    let number = chars.as_str().parse().unwrap_or(u32::MAX);
    (letter, number)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologySchema {
    pub ontology_iri: Option<Iri>,
    pub classes: BTreeSet<Iri>,
    pub subclass_of: BTreeSet<(Iri, Iri)>,
    pub object_properties: BTreeSet<Iri>,
    pub data_properties: BTreeSet<Iri>,
    pub annotation_properties: BTreeSet<Iri>,
    pub subproperty_of: BTreeSet<(Iri, Iri)>,
    pub inverse_of: BTreeSet<(Iri, Iri)>,
    pub domains: BTreeMap<Iri, Iri>,
    pub ranges: BTreeMap<Iri, Iri>,
    pub labels: BTreeMap<Iri, String>,
    pub category_properties: BTreeMap<Category, Iri>,
    pub indicators: Vec<IndicatorDefinition>,
}

impl OntologySchema {
    pub fn is_property(&self, p: &Iri) -> bool {
        self.object_properties.contains(p)
            || self.data_properties.contains(p)
            || self.annotation_properties.contains(p)
            || self.subproperty_of.iter().any(|(a, b)| a == p || b == p)
            || self.inverse_of.iter().any(|(a, b)| a == p || b == p)
            || self.domains.contains_key(p)
    }

    pub fn indicator(&self, code: &str) -> Option<&IndicatorDefinition> {
        let code = code.to_ascii_lowercase();
        self.indicators.iter().find(|i| i.code == code)
    }

    pub fn indicator_for_property(&self, p: &Iri) -> Option<&IndicatorDefinition> {
        self.indicators.iter().find(|i| &i.property_iri == p)
    }

    pub fn category_property(&self, category: Category) -> Option<&Iri> {
        self.category_properties.get(&category)
    }

    /// Strict ancestors of `class` under `subclass_of`.
    pub fn super_classes(&self, class: &Iri) -> BTreeSet<Iri> {
        closure(&self.subclass_of, class)
    }

    /// Every class whose instances are also instances of `class`, including itself.
    pub fn sub_classes_inclusive(&self, class: &Iri) -> BTreeSet<Iri> {
        let inverted: BTreeSet<(Iri, Iri)> = self.subclass_of.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let mut out = closure(&inverted, class);
        out.insert(class.clone());
        out
    }

    /// Both directions of every `owl:inverseOf` pair.
    pub fn inverses_of(&self, p: &Iri) -> BTreeSet<Iri> {
        self.inverse_of
            .iter()
            .filter_map(|(a, b)| {
                if a == p {
                    Some(b.clone())
                } else if b == p {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Fails with `CyclicHierarchy` when either hierarchy has a cycle
    /// (self-loops included).
    pub fn check_acyclic(&self) -> Result<(), SchemaError> {
        for relation in [&self.subclass_of, &self.subproperty_of] {
            if let Some(node) = find_cycle(relation) {
                return Err(SchemaError::CyclicHierarchy(node.as_str().to_owned()));
            }
        }
        Ok(())
    }

    /// Every indicator is well formed and sits below exactly one category
    /// super-property.
    pub fn check_indicators(&self) -> Result<(), SchemaError> {
        let category_iris: BTreeSet<&Iri> = self.category_properties.values().collect();
        for indicator in &self.indicators {
            indicator.check()?;
            let invalid = |reason: String| SchemaError::InvalidIndicator {
                iri: indicator.property_iri.as_str().to_owned(),
                reason,
            };
            if !self.data_properties.contains(&indicator.property_iri) {
                return Err(invalid("not declared as a data property".into()));
            }
            let ancestors = closure(&self.subproperty_of, &indicator.property_iri);
            let categories: Vec<&Iri> = ancestors.iter().filter(|a| category_iris.contains(a)).collect();
            match categories.as_slice() {
                [only] if Some(*only) == self.category_properties.get(&indicator.category) => {}
                [_] => return Err(invalid("category super-property does not match the code".into())),
                other => return Err(invalid(format!("{} category ancestors, expected 1", other.len()))),
            }
        }
        Ok(())
    }
}

/// Transitive closure of `subproperty_of` above `p`, excluding `p`.
pub fn super_properties(schema: &OntologySchema, p: &Iri) -> Result<BTreeSet<Iri>, SchemaError> {
    if !schema.is_property(p) {
        return Err(SchemaError::UnknownProperty(p.as_str().to_owned()));
    }
    let mut out = closure(&schema.subproperty_of, p);
    out.remove(p);
    Ok(out)
}

fn closure(relation: &BTreeSet<(Iri, Iri)>, start: &Iri) -> BTreeSet<Iri> {
    let mut out = BTreeSet::new();
    let mut stack = vec![start.clone()];
    while let Some(node) = stack.pop() {
        for (_, parent) in relation.iter().filter(|(child, _)| *child == node) {
            if out.insert(parent.clone()) {
                stack.push(parent.clone());
            }
        }
    }
    out
}

fn find_cycle(relation: &BTreeSet<(Iri, Iri)>) -> Option<Iri> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut adjacency: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (a, b) in relation {
        adjacency.entry(a).or_default().push(b);
    }
    let mut marks: BTreeMap<&Iri, Mark> = BTreeMap::new();
    for &root in adjacency.keys() {
        if marks.contains_key(root) {
            continue;
        }
        // Iterative DFS with an explicit stack of (node, next child index).
        let mut stack: Vec<(&Iri, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Active);
        while let Some((node, idx)) = stack.pop() {
            let children = adjacency.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if idx < children.len() {
                stack.push((node, idx + 1));
                let child = children[idx];
                match marks.get(child) {
                    Some(Mark::Active) => return Some(child.clone()),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Active);
                        stack.push((child, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
            }
        }
    }
    None
}
