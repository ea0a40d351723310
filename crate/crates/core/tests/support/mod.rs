//! Random generators and brute-force oracles shared by the integration
//! tests and the acceptance suite. Oracles deliberately avoid the store
//! indexes and the query engine: they scan plain triple sets.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use roc_core::ontology::{Category, OntologySchema};
use roc_core::rdf::vocab::{rdf, xsd};
use roc_core::rdf::{numeric_value, BlankNode, Graph, Iri, Literal, Term, Triple};
use roc_core::sparql::{evaluate, parse_query, SolutionTable};
use roc_core::store::{materialize, Store, TriplePattern};
use roc_core::turtle::{parse, serialize, Syntax};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

// ---------------------------------------------------------------- graphs

const NAMESPACES: [&str; 3] = ["http://example.org/ns#", "http://example.org/data/", "urn:x-test:"];
const LOCALS: [&str; 8] = ["a", "item1", "x_y", "x-y", "a.b", "Über", "n42", "CamelCase"];
const STRINGS: [&str; 10] = [
    "",
    "plain",
    "with \"quotes\"",
    "back\\slash",
    "line\nbreak",
    "tab\there",
    "carriage\rreturn",
    "naïve café",
    "emoji 🦠",
    "semi; colon, dot.",
];

fn random_iri(rng: &mut StdRng) -> Iri {
    iri(&format!("{}{}", NAMESPACES.choose(rng).unwrap(), LOCALS.choose(rng).unwrap()))
}

fn random_literal(rng: &mut StdRng) -> Literal {
    match rng.gen_range(0..9) {
        0 => Literal::string(*STRINGS.choose(rng).unwrap()),
        1 => Literal::lang_string(*STRINGS.choose(rng).unwrap(), ["en", "de", "sv-SE"].choose(rng).unwrap()).unwrap(),
        2 => Literal::integer(rng.gen_range(-1000..1000)),
        3 => {
            let lex = ["0.5", "-2.25", "1.0", "100.125", "+3.5", "0.0"].choose(rng).unwrap();
            Literal::new(*lex, iri(xsd::DECIMAL), None).unwrap()
        }
        4 => {
            let lex = ["1.5E3", "-2.0E-2", "1E0", "INF", "NaN"].choose(rng).unwrap();
            Literal::new(*lex, iri(xsd::DOUBLE), None).unwrap()
        }
        5 => Literal::boolean(rng.gen()),
        6 => Literal::new(format!("2020-0{}-1{}", rng.gen_range(1..10), rng.gen_range(0..10)), iri(xsd::DATE), None)
            .unwrap(),
        7 => Literal::new(*STRINGS.choose(rng).unwrap(), iri("http://example.org/ns#custom"), None).unwrap(),
        _ => Literal::string(format!("s{}", rng.gen_range(0..50))),
    }
}

fn random_blank(rng: &mut StdRng) -> BlankNode {
    BlankNode::new(format!("b{}", rng.gen_range(0..12))).unwrap()
}

/// Up to `max` random triples over a vocabulary that exercises escaping,
/// prefixes, blank nodes and every supported literal form.
pub fn random_graph(rng: &mut StdRng, max: usize) -> Graph {
    let n = rng.gen_range(0..=max);
    let mut g = Graph::new();
    g.add_prefix("ex", iri(NAMESPACES[0]));
    g.add_prefix("d", iri(NAMESPACES[1]));
    while g.len() < n {
        let s: Term = if rng.gen_bool(0.2) { random_blank(rng).into() } else { random_iri(rng).into() };
        let p = if rng.gen_bool(0.1) { iri(rdf::TYPE) } else { random_iri(rng) };
        let o: Term = match rng.gen_range(0..4) {
            0 => random_iri(rng).into(),
            1 => random_blank(rng).into(),
            _ => random_literal(rng).into(),
        };
        g.insert(Triple::new(s, p, o).unwrap());
    }
    g
}

/// Serializes `g` and parses it back. The result must be isomorphic and a
/// second serialization must be byte-identical.
pub fn roundtrip_case(g: &Graph, syntax: Syntax) -> Result<(), String> {
    let text = serialize(g, syntax);
    let back = parse(&text, syntax).map_err(|e| format!("reparse failed: {e}\n{text}"))?;
    if back.len() != g.len() || !back.is_isomorphic(g) {
        return Err(format!("round trip changed the graph ({} vs {} triples)\n{text}", back.len(), g.len()));
    }
    if serialize(&back, syntax) != text {
        return Err("serialization is not stable".into());
    }
    Ok(())
}

// ---------------------------------------------------------------- store

/// Oracle for pattern matching: a linear scan.
pub fn scan_match(triples: &BTreeSet<Triple>, pattern: &TriplePattern) -> Vec<Triple> {
    triples.iter().filter(|t| pattern.matches(t)).cloned().collect()
}

fn small_term(rng: &mut StdRng) -> Term {
    match rng.gen_range(0..4) {
        0 => iri(&format!("urn:n{}", rng.gen_range(0..8))).into(),
        1 => BlankNode::new(format!("b{}", rng.gen_range(0..3))).unwrap().into(),
        _ => Literal::integer(rng.gen_range(0..6)).into(),
    }
}

/// One randomized store case: inserts (with duplicates), then compares
/// several lookups against the scan oracle.
pub fn store_case(rng: &mut StdRng) -> Result<(), String> {
    let mut store = Store::new();
    let mut reference = BTreeSet::new();
    for _ in 0..rng.gen_range(0..260) {
        if reference.len() == 200 {
            break;
        }
        let s = match small_term(rng) {
            Term::Literal(_) => iri("urn:n0").into(),
            t => t,
        };
        let t = Triple::new(s, iri(&format!("urn:p{}", rng.gen_range(0..4))), small_term(rng)).unwrap();
        let fresh = reference.insert(t.clone());
        if store.insert(&t) != fresh {
            return Err(format!("insert of {t} reported the wrong novelty"));
        }
    }
    if store.len() != reference.len() {
        return Err(format!("store has {} triples, expected {}", store.len(), reference.len()));
    }
    for _ in 0..20 {
        let s = rng.gen_bool(0.5).then(|| small_term(rng));
        let p = rng.gen_bool(0.5).then(|| Term::from(iri(&format!("urn:p{}", rng.gen_range(0..5)))));
        let o = rng.gen_bool(0.5).then(|| small_term(rng));
        let pattern = TriplePattern::new(s, p, o);
        let got = store.match_pattern(&pattern);
        let want = scan_match(&reference, &pattern);
        if got != want {
            return Err(format!("{pattern:?}: got {} triples, expected {}", got.len(), want.len()));
        }
    }
    let dumped: BTreeSet<Triple> =
        parse(&store.dump(), Syntax::NTriples).map_err(|e| e.to_string())?.iter().cloned().collect();
    if dumped != reference {
        return Err("dump does not reproduce the inserted triples".into());
    }
    Ok(())
}

// ---------------------------------------------------------------- entailment

/// Random schema over properties `urn:p0..5` and classes `urn:c0..3`,
/// cycles allowed.
pub fn random_schema(rng: &mut StdRng) -> OntologySchema {
    let p = |i: usize| iri(&format!("urn:p{i}"));
    let c = |i: usize| iri(&format!("urn:c{i}"));
    let classes = 4;
    let mut schema = OntologySchema::default();
    for _ in 0..rng.gen_range(0..6) {
        schema.subproperty_of.insert((p(rng.gen_range(0..6)), p(rng.gen_range(0..6))));
    }
    for _ in 0..rng.gen_range(0..6) {
        schema.subclass_of.insert((c(rng.gen_range(0..classes)), c(rng.gen_range(0..classes))));
    }
    for _ in 0..rng.gen_range(0..4) {
        schema.domains.insert(p(rng.gen_range(0..6)), c(rng.gen_range(0..classes)));
    }
    for _ in 0..rng.gen_range(0..3) {
        schema.inverse_of.insert((p(rng.gen_range(0..6)), p(rng.gen_range(0..6))));
    }
    schema
}

pub fn random_instance_data(rng: &mut StdRng) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    for _ in 0..rng.gen_range(0..40) {
        let s = iri(&format!("urn:s{}", rng.gen_range(0..6)));
        let t = if rng.gen_bool(0.3) {
            Triple::new(s, iri(rdf::TYPE), iri(&format!("urn:c{}", rng.gen_range(0..4))))
        } else {
            let o: Term = if rng.gen_bool(0.6) {
                iri(&format!("urn:s{}", rng.gen_range(0..6))).into()
            } else {
                Literal::integer(rng.gen_range(0..4)).into()
            };
            Triple::new(s, iri(&format!("urn:p{}", rng.gen_range(0..6))), o)
        };
        out.insert(t.unwrap());
    }
    out
}

/// Oracle for materialization: apply every rule to the whole set until a
/// round adds nothing.
pub fn naive_fixpoint(data: &BTreeSet<Triple>, schema: &OntologySchema) -> BTreeSet<Triple> {
    let ty = iri(rdf::TYPE);
    let mut all = data.clone();
    loop {
        let mut new = Vec::new();
        for t in &all {
            let (s, p, o) = (t.subject(), t.predicate(), t.object());
            for (a, b) in &schema.subproperty_of {
                if a == p {
                    new.push(Triple::new(s.clone(), b.clone(), o.clone()).unwrap());
                }
            }
            if *p == ty {
                for (a, b) in &schema.subclass_of {
                    if Some(a) == o.as_iri() {
                        new.push(Triple::new(s.clone(), ty.clone(), b.clone()).unwrap());
                    }
                }
            }
            if let Some(c) = schema.domains.get(p) {
                new.push(Triple::new(s.clone(), ty.clone(), c.clone()).unwrap());
            }
            if !o.is_literal() {
                for (a, b) in &schema.inverse_of {
                    if a == p {
                        new.push(Triple::new(o.clone(), b.clone(), s.clone()).unwrap());
                    }
                    if b == p {
                        new.push(Triple::new(o.clone(), a.clone(), s.clone()).unwrap());
                    }
                }
            }
        }
        let before = all.len();
        all.extend(new);
        if all.len() == before {
            return all;
        }
    }
}

pub fn entailment_case(rng: &mut StdRng) -> Result<(), String> {
    let schema = random_schema(rng);
    let data = random_instance_data(rng);
    let mut store = Store::new();
    for t in &data {
        store.insert(t);
    }
    let added = materialize(&mut store, &schema);
    let expected = naive_fixpoint(&data, &schema);
    let got: BTreeSet<Triple> = store.iter().collect();
    if got != expected {
        let missing: Vec<_> = expected.difference(&got).take(3).map(|t| t.to_string()).collect();
        let extra: Vec<_> = got.difference(&expected).take(3).map(|t| t.to_string()).collect();
        return Err(format!("closure differs; missing {missing:?}, extra {extra:?}"));
    }
    if added != expected.len() - data.len() {
        return Err(format!("reported {added} inferred triples, expected {}", expected.len() - data.len()));
    }
    for t in &expected {
        if store.is_inferred(t) == data.contains(t) {
            return Err(format!("wrong inferred mark on {t}"));
        }
    }
    if materialize(&mut store, &schema) != 0 {
        return Err("second materialization added triples".into());
    }
    Ok(())
}

// ---------------------------------------------------------------- sparql

const VARS: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Debug, Clone)]
enum Slot {
    Var(usize),
    Const(Term),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Op {
    const ALL: [Op; 6] = [Op::Lt, Op::Le, Op::Eq, Op::Ne, Op::Ge, Op::Gt];

    fn symbol(self) -> &'static str {
        match self {
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Eq => "=",
            Op::Ne => "!=",
            Op::Ge => ">=",
            Op::Gt => ">",
        }
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            Op::Lt => ord.is_lt(),
            Op::Le => ord.is_le(),
            Op::Eq => ord.is_eq(),
            Op::Ne => ord.is_ne(),
            Op::Ge => ord.is_ge(),
            Op::Gt => ord.is_gt(),
        }
    }
}

#[derive(Debug, Clone)]
enum Filter {
    CmpConst(usize, Op, i64),
    CmpVars(usize, Op, usize),
    Bound(usize),
    Not(Box<Filter>),
    Or(Box<Filter>, Box<Filter>),
}

impl Filter {
    fn text(&self) -> String {
        match self {
            Filter::CmpConst(v, op, k) => format!("(?{} {} {k})", VARS[*v], op.symbol()),
            Filter::CmpVars(a, op, b) => format!("(?{} {} ?{})", VARS[*a], op.symbol(), VARS[*b]),
            Filter::Bound(v) => format!("bound(?{})", VARS[*v]),
            Filter::Not(f) => format!("!{}", f.text()),
            Filter::Or(a, b) => format!("({} || {})", a.text(), b.text()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Agg {
    Count,
    CountStar,
    Sum,
    Avg,
    Min,
    Max,
}

#[derive(Debug, Clone)]
enum Select {
    Star,
    Vars(Vec<usize>),
    Grouped { key: usize, aggs: Vec<(Agg, usize, String)> },
}

/// A randomly generated query together with the structure the oracle
/// evaluates; the engine only ever sees `text`.
#[derive(Debug, Clone)]
pub struct GenQuery {
    pub text: String,
    patterns: Vec<[Slot; 3]>,
    filters: Vec<Filter>,
    select: Select,
    distinct: bool,
    order: Option<(String, bool)>,
    limit: Option<usize>,
    offset: Option<usize>,
}

fn data_term(rng: &mut StdRng) -> Term {
    match rng.gen_range(0..5) {
        0 | 1 => iri(&format!("urn:e{}", rng.gen_range(0..5))).into(),
        2 => Literal::string(["a", "b", "c"].choose(rng).unwrap().to_string()).into(),
        _ => Literal::integer(rng.gen_range(-2..6)).into(),
    }
}

/// Random data for query cases: IRIs, integers and plain strings.
pub fn random_query_graph(rng: &mut StdRng) -> Graph {
    let mut g = Graph::new();
    for _ in 0..rng.gen_range(0..80) {
        let s = iri(&format!("urn:e{}", rng.gen_range(0..5)));
        let p = iri(&format!("urn:p{}", rng.gen_range(0..3)));
        g.insert(Triple::new(s, p, data_term(rng)).unwrap());
    }
    g
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Literal(l) if l.datatype().as_str() == xsd::INTEGER => l.lexical().to_owned(),
        other => other.to_string(),
    }
}

fn random_filter(rng: &mut StdRng, depth: u32) -> Filter {
    match rng.gen_range(0..if depth == 0 { 3 } else { 5 }) {
        0 => Filter::CmpConst(rng.gen_range(0..4), *Op::ALL.choose(rng).unwrap(), rng.gen_range(-1..5)),
        1 => Filter::CmpVars(rng.gen_range(0..4), *Op::ALL.choose(rng).unwrap(), rng.gen_range(0..4)),
        2 => Filter::Bound(rng.gen_range(0..4)),
        3 => Filter::Not(Box::new(random_filter(rng, depth - 1))),
        _ => Filter::Or(Box::new(random_filter(rng, depth - 1)), Box::new(random_filter(rng, depth - 1))),
    }
}

pub fn random_query(rng: &mut StdRng) -> GenQuery {
    let mut patterns = Vec::new();
    let n_patterns = *[1, 1, 2, 2, 3, 4].choose(rng).unwrap();
    for _ in 0..n_patterns {
        let s = if rng.gen_bool(0.85) {
            Slot::Var(rng.gen_range(0..4))
        } else {
            Slot::Const(iri(&format!("urn:e{}", rng.gen_range(0..5))).into())
        };
        let p = if rng.gen_bool(0.25) {
            Slot::Var(rng.gen_range(0..4))
        } else {
            Slot::Const(iri(&format!("urn:p{}", rng.gen_range(0..3))).into())
        };
        let o = if rng.gen_bool(0.7) { Slot::Var(rng.gen_range(0..4)) } else { Slot::Const(data_term(rng)) };
        patterns.push([s, p, o]);
    }
    let mut in_patterns: Vec<usize> = Vec::new();
    for p in &patterns {
        for slot in p {
            if let Slot::Var(v) = slot {
                if !in_patterns.contains(v) {
                    in_patterns.push(*v);
                }
            }
        }
    }
    let filters: Vec<Filter> = (0..*[0, 0, 1, 1, 2].choose(rng).unwrap()).map(|_| random_filter(rng, 2)).collect();

    let grouped = !in_patterns.is_empty() && rng.gen_bool(0.35);
    let select = if grouped {
        let key = *in_patterns.choose(rng).unwrap();
        let mut aggs = Vec::new();
        for i in 0..1 {
            let f = *[Agg::Count, Agg::CountStar, Agg::Sum, Agg::Avg, Agg::Min, Agg::Max].choose(rng).unwrap();
            aggs.push((f, rng.gen_range(0..4), format!("agg{i}")));
        }
        Select::Grouped { key, aggs }
    } else if rng.gen_bool(0.3) {
        Select::Star
    } else {
        let mut vars: Vec<usize> = (0..4).filter(|_| rng.gen_bool(0.5)).collect();
        if vars.is_empty() {
            vars.push(rng.gen_range(0..4));
        }
        vars.shuffle(rng);
        Select::Vars(vars)
    };
    let out_columns: Vec<String> = match &select {
        Select::Star => in_patterns.iter().map(|&v| VARS[v].to_owned()).collect(),
        Select::Vars(vs) => vs.iter().map(|&v| VARS[v].to_owned()).collect(),
        Select::Grouped { key, aggs } => {
            let mut c = vec![VARS[*key].to_owned()];
            c.extend(aggs.iter().map(|a| a.2.clone()));
            c
        }
    };
    let order =
        (!out_columns.is_empty() && rng.gen_bool(0.5)).then(|| (out_columns.choose(rng).unwrap().clone(), rng.gen()));
    let limit = rng.gen_bool(0.3).then(|| rng.gen_range(0..6));
    let offset = rng.gen_bool(0.2).then(|| rng.gen_range(0..4));
    let distinct = rng.gen_bool(0.3);

    let mut text = String::from("SELECT ");
    if distinct {
        text.push_str("DISTINCT ");
    }
    match &select {
        Select::Star => text.push('*'),
        Select::Vars(vs) => text.push_str(&vs.iter().map(|&v| format!("?{}", VARS[v])).collect::<Vec<_>>().join(" ")),
        Select::Grouped { key, aggs } => {
            text.push_str(&format!("?{}", VARS[*key]));
            for (f, v, alias) in aggs {
                let call = match f {
                    Agg::Count => format!("COUNT(?{})", VARS[*v]),
                    Agg::CountStar => "COUNT(*)".to_owned(),
                    Agg::Sum => format!("SUM(?{})", VARS[*v]),
                    Agg::Avg => format!("AVG(?{})", VARS[*v]),
                    Agg::Min => format!("MIN(?{})", VARS[*v]),
                    Agg::Max => format!("MAX(?{})", VARS[*v]),
                };
                text.push_str(&format!(" ({call} AS ?{alias})"));
            }
        }
    }
    text.push_str(" WHERE {\n");
    for p in &patterns {
        let part = |s: &Slot| match s {
            Slot::Var(v) => format!("?{}", VARS[*v]),
            Slot::Const(t) => term_text(t),
        };
        text.push_str(&format!("  {} {} {} .\n", part(&p[0]), part(&p[1]), part(&p[2])));
    }
    for f in &filters {
        text.push_str(&format!("  FILTER({})\n", f.text()));
    }
    text.push('}');
    if let Select::Grouped { key, .. } = &select {
        text.push_str(&format!(" GROUP BY ?{}", VARS[*key]));
    }
    if let Some((col, desc)) = &order {
        text.push_str(&if *desc { format!(" ORDER BY DESC(?{col})") } else { format!(" ORDER BY ?{col}") });
    }
    if let Some(l) = limit {
        text.push_str(&format!(" LIMIT {l}"));
    }
    if let Some(o) = offset {
        text.push_str(&format!(" OFFSET {o}"));
    }
    GenQuery { text, patterns, filters, select, distinct, order, limit, offset }
}

/// Values the oracle reasons about.
#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Unbound,
    Term(Term),
    Num(f64),
}

fn rank(t: &Term) -> u8 {
    match t {
        Term::BlankNode(_) => 1,
        Term::Iri(_) => 2,
        Term::Literal(l) if numeric_value(l).is_ok() => 3,
        Term::Literal(_) => 4,
    }
}

fn int_of(t: &Term) -> Option<i64> {
    let l = t.as_literal()?;
    (l.datatype().as_str() == xsd::INTEGER).then(|| l.lexical().parse().ok())?
}

fn oracle_order(a: &Cell, b: &Cell) -> Ordering {
    match (a, b) {
        (Cell::Unbound, Cell::Unbound) => Ordering::Equal,
        (Cell::Unbound, _) => Ordering::Less,
        (_, Cell::Unbound) => Ordering::Greater,
        (Cell::Num(x), Cell::Num(y)) => x.partial_cmp(y).unwrap(),
        (Cell::Term(x), Cell::Term(y)) => rank(x).cmp(&rank(y)).then_with(|| match (int_of(x), int_of(y)) {
            (Some(i), Some(j)) => i.cmp(&j),
            _ => match (x, y) {
                (Term::Iri(i), Term::Iri(j)) => i.as_str().cmp(j.as_str()),
                (Term::Literal(i), Term::Literal(j)) => i.lexical().cmp(j.lexical()),
                _ => Ordering::Equal,
            },
        }),
        _ => panic!("mixed cell kinds in one column"),
    }
}

fn oracle_compare(a: &Term, op: Op, b: &Term) -> bool {
    if let (Some(x), Some(y)) = (int_of(a), int_of(b)) {
        return op.holds(x.cmp(&y));
    }
    match (a, b) {
        (Term::Literal(x), Term::Literal(y)) if x.is_string() && y.is_string() => {
            op.holds(x.lexical().cmp(y.lexical()))
        }
        (Term::Iri(x), Term::Iri(y)) => match op {
            Op::Eq => x == y,
            Op::Ne => x != y,
            _ => false,
        },
        _ => false,
    }
}

fn oracle_filter(f: &Filter, row: &[Option<Term>]) -> Option<bool> {
    match f {
        Filter::CmpConst(v, op, k) => Some(oracle_compare(row[*v].as_ref()?, *op, &Literal::integer(*k).into())),
        Filter::CmpVars(a, op, b) => Some(oracle_compare(row[*a].as_ref()?, *op, row[*b].as_ref()?)),
        Filter::Bound(v) => Some(row[*v].is_some()),
        Filter::Not(inner) => oracle_filter(inner, row).map(|b| !b),
        Filter::Or(a, b) => match (oracle_filter(a, row), oracle_filter(b, row)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
    }
}

/// Brute force: every pattern is matched by scanning all triples, in query
/// order, with no indexes.
fn oracle_solutions(q: &GenQuery, triples: &[Triple]) -> Vec<Vec<Option<Term>>> {
    let mut rows: Vec<Vec<Option<Term>>> = vec![vec![None; 4]];
    for p in &q.patterns {
        let mut next = Vec::new();
        for row in &rows {
            for t in triples {
                let mut r = row.clone();
                let parts: [Term; 3] = [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()];
                let ok = p.iter().zip(parts).all(|(slot, value)| match slot {
                    Slot::Const(c) => *c == value,
                    Slot::Var(v) => match &r[*v] {
                        Some(bound) => *bound == value,
                        None => {
                            r[*v] = Some(value);
                            true
                        }
                    },
                });
                if ok {
                    next.push(r);
                }
            }
        }
        rows = next;
    }
    rows.retain(|r| q.filters.iter().all(|f| oracle_filter(f, r) == Some(true)));
    rows
}

fn oracle_aggregate(f: Agg, v: usize, members: &[&Vec<Option<Term>>]) -> Cell {
    let values: Vec<&Term> = members.iter().filter_map(|r| r[v].as_ref()).collect();
    let ints: Vec<i64> = values.iter().filter_map(|t| int_of(t)).collect();
    match f {
        Agg::CountStar => Cell::Num(members.len() as f64),
        Agg::Count => Cell::Num(values.len() as f64),
        Agg::Sum => Cell::Num(ints.iter().sum::<i64>() as f64),
        Agg::Avg if ints.is_empty() => Cell::Num(0.0),
        Agg::Avg => Cell::Num(ints.iter().sum::<i64>() as f64 / ints.len() as f64),
        Agg::Min | Agg::Max => {
            let cells = values.into_iter().map(|t| Cell::Term(t.clone()));
            let pick = if f == Agg::Min { cells.min_by(oracle_order) } else { cells.max_by(oracle_order) };
            pick.unwrap_or(Cell::Unbound)
        }
    }
}

/// Output columns and rows, before ORDER BY, DISTINCT and slicing.
fn oracle_table(q: &GenQuery, triples: &[Triple]) -> (Vec<String>, Vec<Vec<Cell>>) {
    let rows = oracle_solutions(q, triples);
    let cell = |t: &Option<Term>| t.clone().map_or(Cell::Unbound, Cell::Term);
    match &q.select {
        Select::Star | Select::Vars(_) => {
            let vars: Vec<usize> = match &q.select {
                Select::Vars(vs) => vs.clone(),
                _ => {
                    let mut seen = Vec::new();
                    for p in &q.patterns {
                        for slot in p {
                            if let Slot::Var(v) = slot {
                                if !seen.contains(v) {
                                    seen.push(*v);
                                }
                            }
                        }
                    }
                    seen
                }
            };
            let names = vars.iter().map(|&v| VARS[v].to_owned()).collect();
            (names, rows.iter().map(|r| vars.iter().map(|&v| cell(&r[v])).collect()).collect())
        }
        Select::Grouped { key, aggs } => {
            let mut groups: Vec<(Term, Vec<&Vec<Option<Term>>>)> = Vec::new();
            for r in &rows {
                let k = r[*key].clone().expect("group keys come from patterns");
                match groups.iter_mut().find(|(g, _)| *g == k) {
                    Some((_, members)) => members.push(r),
                    None => groups.push((k, vec![r])),
                }
            }
            let mut names = vec![VARS[*key].to_owned()];
            names.extend(aggs.iter().map(|a| a.2.clone()));
            let out = groups
                .iter()
                .map(|(k, members)| {
                    let mut row = vec![Cell::Term(k.clone())];
                    row.extend(aggs.iter().map(|(f, v, _)| oracle_aggregate(*f, *v, members)));
                    row
                })
                .collect();
            (names, out)
        }
    }
}

fn engine_cells(q: &GenQuery, table: &SolutionTable) -> Vec<Vec<Cell>> {
    let numeric_cols: Vec<bool> = table
        .variables
        .iter()
        .map(|name| match &q.select {
            Select::Grouped { aggs, .. } => aggs
                .iter()
                .any(|(f, _, alias)| alias == name && matches!(f, Agg::Count | Agg::CountStar | Agg::Sum | Agg::Avg)),
            _ => false,
        })
        .collect();
    table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&numeric_cols)
                .map(|(v, &numeric)| match v {
                    None => Cell::Unbound,
                    Some(Term::Literal(l)) if numeric => {
                        Cell::Num(numeric_value(l).map(|n| n.to_f64()).unwrap_or(f64::NAN))
                    }
                    Some(t) => Cell::Term(t.clone()),
                })
                .collect()
        })
        .collect()
}

fn cell_key(c: &Cell) -> String {
    match c {
        Cell::Unbound => "-".into(),
        Cell::Term(t) => t.to_string(),
        Cell::Num(x) => format!("{x:.9}"),
    }
}

fn row_keys(rows: &[Vec<Cell>]) -> Vec<Vec<String>> {
    let mut keys: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(cell_key).collect()).collect();
    keys.sort();
    keys
}

/// Compares the engine against the brute-force oracle on `graph`.
pub fn query_case(graph: &Graph, q: &GenQuery) -> Result<(), String> {
    let parsed = parse_query(&q.text).map_err(|e| format!("{e}\n{}", q.text))?;
    let table = evaluate(&parsed, &Store::from_graph(graph));
    let triples: Vec<Triple> = graph.iter().cloned().collect();
    let (names, mut want) = oracle_table(q, &triples);
    if table.variables != names {
        return Err(format!("columns {:?}, expected {names:?}\n{}", table.variables, q.text));
    }
    if q.distinct {
        let mut seen = BTreeSet::new();
        want.retain(|r| seen.insert(r.iter().map(cell_key).collect::<Vec<_>>()));
    }
    let got = engine_cells(q, &table);
    macro_rules! fail {
        ($what:expr) => {
            Err(format!("{}\n{}\ngot  {:?}\nwant {:?}", $what, q.text, row_keys(&got), row_keys(&want)))
        };
    }

    let sliced_len = want.len().saturating_sub(q.offset.unwrap_or(0)).min(q.limit.unwrap_or(usize::MAX));
    if got.len() != sliced_len {
        return fail!("row count differs");
    }
    if q.limit.is_none() && q.offset.is_none() && row_keys(&got) != row_keys(&want) {
        return fail!("rows differ");
    }
    // Every returned row must be one the oracle produced.
    let mut pool = row_keys(&want);
    for r in row_keys(&got) {
        match pool.iter().position(|w| *w == r) {
            Some(i) => {
                pool.remove(i);
            }
            None => return fail!("unexpected row"),
        }
    }
    if let Some((col, desc)) = &q.order {
        let c = names.iter().position(|n| n == col).unwrap();
        want.sort_by(|a, b| {
            let o = oracle_order(&a[c], &b[c]);
            if *desc {
                o.reverse()
            } else {
                o
            }
        });
        let expected: Vec<String> = want
            .iter()
            .skip(q.offset.unwrap_or(0))
            .take(q.limit.unwrap_or(usize::MAX))
            .map(|r| cell_key(&r[c]))
            .collect();
        let actual: Vec<String> = got.iter().map(|r| cell_key(&r[c])).collect();
        if expected != actual {
            return fail!(format!("order of ?{col} differs: {actual:?} vs {expected:?}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- ingest

/// Closed-form triple count for an OxCGRT-shaped CSV under the preset:
/// per row a type, a date, a country link and one triple per non-null
/// value cell; per country a type and a label.
pub fn oxcgrt_triple_tally(csv_bytes: &[u8]) -> (usize, usize) {
    let mut reader = csv::ReaderBuilder::new().from_reader(csv_bytes);
    let header = reader.headers().unwrap().clone();
    let id_columns = ["CountryName", "CountryCode", "Date"];
    let mut rows = 0;
    let mut triples = 0;
    let mut countries = BTreeSet::new();
    for record in reader.records() {
        let record = record.unwrap();
        rows += 1;
        triples += 3;
        countries.insert(record[1].to_owned());
        for (name, cell) in header.iter().zip(record.iter()) {
            let cell = cell.trim();
            if !id_columns.contains(&name) && !cell.is_empty() && cell != "NA" {
                triples += 1;
            }
        }
    }
    (rows, triples + 2 * countries.len())
}

/// Oracle for category entailment: every asserted indicator value in
/// category `cat` must reappear under the category property, and nothing
/// else may.
pub fn category_scan(asserted: &Graph, schema: &OntologySchema, cat: Category) -> BTreeSet<(Term, Term)> {
    let members: BTreeSet<&Iri> =
        schema.indicators.iter().filter(|d| d.category == cat).map(|d| &d.property_iri).collect();
    asserted
        .iter()
        .filter(|t| members.contains(t.predicate()))
        .map(|t| (t.subject().clone(), t.object().clone()))
        .collect()
}
