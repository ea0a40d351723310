use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use crate::rdf::vocab::xsd;
use crate::rdf::{compare_terms, numeric_value, Literal, Numeric, Term};
use crate::store::{Id, Store};

use super::{Aggregate, AggregateFn, CompareOp, Expr, Projection, Query, QueryError, SolutionTable, VarOrTerm};

/// One solution over interned ids; `None` is an unbound variable.
type IdRow = Vec<Option<Id>>;
type TermRow = Vec<Option<Term>>;

/// Evaluates `query` with no deadline.
pub fn evaluate(query: &Query, store: &Store) -> SolutionTable {
    evaluate_with_deadline(query, store, None).expect("evaluation without a deadline cannot time out")
}

/// Evaluates `query`, giving up with `Timeout` once `deadline` passes.
/// The clock is only read when a deadline is given.
pub fn evaluate_with_deadline(
    query: &Query,
    store: &Store,
    deadline: Option<Instant>,
) -> Result<SolutionTable, QueryError> {
    let mut clock = Clock { deadline, ticks: 0 };
    let (vars, id_rows) = match_bgp(query, store, &mut clock)?;
    let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();

    let mut rows: Vec<Vec<Option<&Term>>> = Vec::with_capacity(id_rows.len());
    for ids in &id_rows {
        clock.tick()?;
        let row: Vec<Option<&Term>> = ids.iter().map(|id| id.map(|id| store.term(id))).collect();
        let lookup = |v: &str| index.get(v).and_then(|&i| row[i]);
        if query.filters.iter().all(|f| ebv_expr(f, &lookup) == Some(true)) {
            rows.push(row);
        }
    }
    // Canonical base order, independent of how terms were interned.
    rows.sort_by(|a, b| cmp_rows(a, b));

    let out_vars = query.result_variables();
    let (columns, mut rows): (Vec<String>, Vec<Vec<Option<Term>>>) = if query.is_grouped() {
        group(query, &index, &rows)
    } else {
        (vars.clone(), rows.into_iter().map(|r| r.into_iter().map(|t| t.cloned()).collect()).collect())
    };

    if !query.order_by.is_empty() {
        let col: HashMap<&str, usize> = columns.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut keyed: Vec<(TermRow, TermRow)> = rows
            .into_iter()
            .map(|row| {
                let lookup = |v: &str| col.get(v).and_then(|&i| row[i].as_ref());
                let keys = query.order_by.iter().map(|k| eval_expr(&k.expr, &lookup)).collect();
                (keys, row)
            })
            .collect();
        keyed.sort_by(|(a, _), (b, _)| {
            for ((x, y), key) in a.iter().zip(b).zip(&query.order_by) {
                let ord = term_order(x.as_ref(), y.as_ref());
                let ord = if key.descending { ord.reverse() } else { ord };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        });
        rows = keyed.into_iter().map(|(_, row)| row).collect();
    }

    let positions: Vec<Option<usize>> = out_vars.iter().map(|v| columns.iter().position(|c| c == v)).collect();
    let mut projected: Vec<Vec<Option<Term>>> =
        rows.into_iter().map(|mut row| positions.iter().map(|p| p.and_then(|i| row[i].take())).collect()).collect();
    if query.distinct {
        let mut seen = HashSet::new();
        projected.retain(|r| seen.insert(r.clone()));
    }
    let offset = query.offset.unwrap_or(0).min(projected.len());
    projected.drain(..offset);
    if let Some(limit) = query.limit {
        projected.truncate(limit);
    }
    Ok(SolutionTable { variables: out_vars, rows: projected })
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
}

impl Clock {
    fn tick(&mut self) -> Result<(), QueryError> {
        if let Some(deadline) = self.deadline {
            self.ticks = self.ticks.wrapping_add(1);
            if self.ticks % 1024 == 0 && Instant::now() > deadline {
                return Err(QueryError::Timeout);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Const(Id),
    Var(usize),
}

/// Basic graph pattern matching over term ids. Variables include the
/// hidden `_:` placeholders for blank nodes in the query.
fn match_bgp(query: &Query, store: &Store, clock: &mut Clock) -> Result<(Vec<String>, Vec<IdRow>), QueryError> {
    let mut vars: Vec<String> = query.pattern_variables();
    for p in &query.patterns {
        for x in [&p.s, &p.p, &p.o] {
            if let VarOrTerm::Var(v) = x {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
    }
    let mut compiled = Vec::with_capacity(query.patterns.len());
    for p in &query.patterns {
        let mut slots = [Slot::Var(0); 3];
        for (slot, x) in slots.iter_mut().zip([&p.s, &p.p, &p.o]) {
            *slot = match x {
                VarOrTerm::Var(v) => Slot::Var(vars.iter().position(|w| w == v).expect("collected above")),
                VarOrTerm::Term(t) => match store.id_of(t) {
                    Some(id) => Slot::Const(id),
                    None => return Ok((vars, Vec::new())),
                },
            };
        }
        compiled.push(slots);
    }

    // Greedy join order: most bound positions first, ties in query order.
    let mut order = Vec::with_capacity(compiled.len());
    let mut bound = vec![false; vars.len()];
    let mut remaining: Vec<usize> = (0..compiled.len()).collect();
    while !remaining.is_empty() {
        let score = |i: usize| {
            compiled[i]
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count()
        };
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| score(a).cmp(&score(b)).then(b.cmp(&a)))
            .expect("non-empty");
        let next = remaining.remove(pos);
        for s in compiled[next] {
            if let Slot::Var(v) = s {
                bound[v] = true;
            }
        }
        order.push(compiled[next]);
    }

    let mut out = Vec::new();
    let mut row = vec![None; vars.len()];
    join(store, &order, &mut row, &mut out, clock)?;
    Ok((vars, out))
}

fn join(
    store: &Store,
    patterns: &[[Slot; 3]],
    row: &mut Vec<Option<Id>>,
    out: &mut Vec<IdRow>,
    clock: &mut Clock,
) -> Result<(), QueryError> {
    let Some((first, rest)) = patterns.split_first() else {
        out.push(row.clone());
        return Ok(());
    };
    let resolve = |s: Slot, row: &[Option<Id>]| match s {
        Slot::Const(id) => Some(id),
        Slot::Var(v) => row[v],
    };
    let [s, p, o] = first.map(|slot| resolve(slot, row));
    let matches: Vec<[Id; 3]> = store.match_ids(s, p, o).collect();
    for key in matches {
        clock.tick()?;
        let saved = row.clone();
        let mut ok = true;
        for (slot, id) in first.iter().zip(key) {
            if let Slot::Var(v) = *slot {
                match row[v] {
                    Some(existing) if existing != id => {
                        ok = false;
                        break;
                    }
                    _ => row[v] = Some(id),
                }
            }
        }
        if ok {
            join(store, rest, row, out, clock)?;
        }
        *row = saved;
    }
    Ok(())
}

fn cmp_rows(a: &[Option<&Term>], b: &[Option<&Term>]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = match (x, y) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => compare_terms(x, y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Groups rows and computes aggregates. Returned columns are the GROUP BY
/// variables followed by any other projected names.
fn group(
    query: &Query,
    index: &HashMap<&str, usize>,
    rows: &[Vec<Option<&Term>>],
) -> (Vec<String>, Vec<Vec<Option<Term>>>) {
    let key_cols: Vec<Option<usize>> = query.group_by.iter().map(|v| index.get(v.as_str()).copied()).collect();
    let mut groups: BTreeMap<Vec<Option<&Term>>, Vec<usize>> = BTreeMap::new();
    if query.group_by.is_empty() {
        groups.insert(Vec::new(), (0..rows.len()).collect());
    } else {
        for (i, row) in rows.iter().enumerate() {
            let key = key_cols.iter().map(|c| c.and_then(|c| row[c])).collect();
            groups.entry(key).or_default().push(i);
        }
    }

    let mut columns: Vec<String> = query.group_by.clone();
    for p in &query.projection {
        if !columns.iter().any(|c| c == p.name()) {
            columns.push(p.name().to_owned());
        }
    }
    let out = groups
        .into_iter()
        .map(|(key, members)| {
            columns
                .iter()
                .map(|c| {
                    if let Some(k) = query.group_by.iter().position(|g| g == c) {
                        return key[k].cloned();
                    }
                    match query.projection.iter().find(|p| p.name() == c) {
                        Some(Projection::Aggregate(agg)) => aggregate(agg, index, rows, &members),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();
    (columns, out)
}

fn aggregate(
    agg: &Aggregate,
    index: &HashMap<&str, usize>,
    rows: &[Vec<Option<&Term>>],
    members: &[usize],
) -> Option<Term> {
    let Some(var) = &agg.var else {
        let n =
            if agg.distinct { members.iter().map(|&i| &rows[i]).collect::<HashSet<_>>().len() } else { members.len() };
        return Some(Literal::integer(n as i64).into());
    };
    let col = index.get(var.as_str()).copied();
    let mut values: Vec<&Term> = members.iter().filter_map(|&i| col.and_then(|c| rows[i][c])).collect();
    if agg.distinct {
        let mut seen = HashSet::new();
        values.retain(|t| seen.insert(*t));
    }
    let numbers = || values.iter().filter_map(|t| t.as_literal().and_then(|l| numeric_value(l).ok()));
    match agg.func {
        AggregateFn::Count => Some(Literal::integer(values.len() as i64).into()),
        AggregateFn::Sum => Some(numbers().fold(Numeric::Integer(0), Numeric::plus).to_literal().into()),
        AggregateFn::Avg => {
            let (sum, n) = numbers().fold((Numeric::Integer(0), 0i64), |(s, n), x| (s.plus(x), n + 1));
            let avg = if n == 0 { Numeric::Integer(0) } else { sum.checked_div(Numeric::Integer(n))? };
            Some(avg.to_literal().into())
        }
        AggregateFn::Min => values.iter().min_by(|a, b| term_order(Some(a), Some(b))).map(|t| (*t).clone()),
        AggregateFn::Max => values.iter().max_by(|a, b| term_order(Some(a), Some(b))).map(|t| (*t).clone()),
    }
}

fn numeric_of(t: &Term) -> Option<Numeric> {
    t.as_literal().and_then(|l| numeric_value(l).ok())
}

/// Order used by ORDER BY, MIN and MAX: unbound, blank nodes, IRIs, numeric
/// literals by value (NaN last), then other literals.
pub fn term_order(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    fn rank(t: Option<&Term>) -> u8 {
        match t {
            None => 0,
            Some(Term::BlankNode(_)) => 1,
            Some(Term::Iri(_)) => 2,
            Some(t) if numeric_of(t).is_some() => 3,
            Some(_) => 4,
        }
    }
    let (ra, rb) = (rank(a), rank(b));
    if ra != rb {
        return ra.cmp(&rb);
    }
    let (Some(a), Some(b)) = (a, b) else { return Ordering::Equal };
    if ra == 3 {
        let (x, y) = (numeric_of(a).expect("ranked numeric"), numeric_of(b).expect("ranked numeric"));
        let by_value = match x.compare(y) {
            Some(ord) => ord,
            None => {
                let (nx, ny) = (x.to_f64().is_nan(), y.to_f64().is_nan());
                nx.cmp(&ny)
            }
        };
        return by_value.then_with(|| compare_terms(a, b));
    }
    compare_terms(a, b)
}

/// Value of an expression; `None` is an evaluation error (for example an
/// unbound variable).
fn eval_expr<'a>(e: &Expr, lookup: &dyn Fn(&str) -> Option<&'a Term>) -> Option<Term> {
    match e {
        Expr::Var(v) => lookup(v).cloned(),
        Expr::Const(t) => Some(t.clone()),
        _ => ebv_expr(e, lookup).map(|b| Literal::boolean(b).into()),
    }
}

fn ebv_expr<'a>(e: &Expr, lookup: &dyn Fn(&str) -> Option<&'a Term>) -> Option<bool> {
    match e {
        Expr::Var(_) | Expr::Const(_) => ebv(&eval_expr(e, lookup)?),
        Expr::Bound(v) => Some(lookup(v).is_some()),
        Expr::Not(inner) => ebv_expr(inner, lookup).map(|b| !b),
        Expr::And(a, b) => match (ebv_expr(a, lookup), ebv_expr(b, lookup)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Expr::Or(a, b) => match (ebv_expr(a, lookup), ebv_expr(b, lookup)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Expr::Compare(op, a, b) => Some(compare(*op, &eval_expr(a, lookup)?, &eval_expr(b, lookup)?)),
    }
}

/// Effective boolean value.
fn ebv(t: &Term) -> Option<bool> {
    let l = t.as_literal()?;
    if l.datatype().as_str() == xsd::BOOLEAN {
        return l.as_bool();
    }
    if let Ok(n) = numeric_value(l) {
        let f = n.to_f64();
        return Some(f != 0.0 && !f.is_nan());
    }
    if l.is_string() || l.lang().is_some() {
        return Some(!l.lexical().is_empty());
    }
    None
}

enum Kind<'a> {
    Numeric(Numeric),
    Date(chrono::NaiveDate),
    Str(Option<&'a str>, &'a str),
    Bool(bool),
    /// Terms compared only for identity.
    Opaque(u8, &'a str),
}

fn kind(t: &Term) -> Kind<'_> {
    match t {
        Term::BlankNode(_) => Kind::Opaque(0, ""),
        Term::Iri(_) => Kind::Opaque(1, ""),
        Term::Literal(l) => {
            if let Ok(n) = numeric_value(l) {
                Kind::Numeric(n)
            } else if let Some(d) = l.as_date() {
                Kind::Date(d)
            } else if let Some(b) = l.as_bool() {
                Kind::Bool(b)
            } else if l.is_string() || l.lang().is_some() {
                Kind::Str(l.lang(), l.lexical())
            } else {
                Kind::Opaque(2, l.datatype().as_str())
            }
        }
    }
}

/// Comparison of two bound values. Values of different kinds are
/// incomparable, so every operator yields false.
fn compare(op: CompareOp, a: &Term, b: &Term) -> bool {
    let ord = match (kind(a), kind(b)) {
        (Kind::Numeric(x), Kind::Numeric(y)) => x.compare(y),
        (Kind::Date(x), Kind::Date(y)) => Some(x.cmp(&y)),
        (Kind::Bool(x), Kind::Bool(y)) => Some(x.cmp(&y)),
        (Kind::Str(la, x), Kind::Str(lb, y)) if la.map(str::to_ascii_lowercase) == lb.map(str::to_ascii_lowercase) => {
            Some(x.cmp(y))
        }
        (Kind::Opaque(ka, da), Kind::Opaque(kb, db)) if ka == kb && da == db => {
            return match op {
                CompareOp::Eq => a == b,
                CompareOp::Ne => a != b,
                _ => false,
            };
        }
        _ => return false,
    };
    match ord {
        None => op == CompareOp::Ne,
        Some(ord) => match op {
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
            CompareOp::Ge => ord != Ordering::Less,
            CompareOp::Gt => ord == Ordering::Greater,
        },
    }
}
