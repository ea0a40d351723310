//! The SPARQL subset needed by the competency questions: SELECT over basic
//! graph patterns with FILTER, GROUP BY, AVG/SUM/COUNT/MIN/MAX, DISTINCT,
//! ORDER BY, LIMIT and OFFSET.
//!
//! Bare aggregates (`SELECT ?c AVG(?x)`) are accepted and get
//! the alias `avg_x`.

mod eval;
mod lexer;
mod parser;
mod results;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::{Iri, Term};

pub use eval::{evaluate, evaluate_with_deadline, term_order};
pub use parser::parse_query;
pub use results::{serialize_results, ResultFormat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported SPARQL feature: {0}")]
    UnsupportedFeature(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("invalid query: {0}")]
    Invalid(String),
    #[error("query evaluation exceeded its deadline")]
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarOrTerm {
    Var(String),
    Term(Term),
}

impl fmt::Display for VarOrTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarOrTerm::Var(v) => write!(f, "?{v}"),
            VarOrTerm::Term(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTemplate {
    pub s: VarOrTerm,
    pub p: VarOrTerm,
    pub o: VarOrTerm,
}

impl fmt::Display for PatternTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.s, self.p, self.o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregateFn {
    Avg,
    Sum,
    Count,
    Min,
    Max,
}

impl AggregateFn {
    pub fn name(self) -> &'static str {
        match self {
            AggregateFn::Avg => "AVG",
            AggregateFn::Sum => "SUM",
            AggregateFn::Count => "COUNT",
            AggregateFn::Min => "MIN",
            AggregateFn::Max => "MAX",
        }
    }
}

impl FromStr for AggregateFn {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AVG" => Ok(AggregateFn::Avg),
            "SUM" => Ok(AggregateFn::Sum),
            "COUNT" => Ok(AggregateFn::Count),
            "MIN" => Ok(AggregateFn::Min),
            "MAX" => Ok(AggregateFn::Max),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregate {
    pub func: AggregateFn,
    /// `None` for `COUNT(*)`.
    pub var: Option<String>,
    pub distinct: bool,
    pub alias: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Var(String),
    Aggregate(Aggregate),
}

impl Projection {
    pub fn name(&self) -> &str {
        match self {
            Projection::Var(v) => v,
            Projection::Aggregate(a) => &a.alias,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Ge => ">=",
            CompareOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(Term),
    Bound(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Compare(CompareOp, Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "?{v}"),
            Expr::Const(t) => write!(f, "{t}"),
            Expr::Bound(v) => write!(f, "bound(?{v})"),
            Expr::Not(e) => write!(f, "!({e})"),
            Expr::And(a, b) => write!(f, "({a} && {b})"),
            Expr::Or(a, b) => write!(f, "({a} || {b})"),
            Expr::Compare(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderKey {
    pub expr: Expr,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Query {
    pub prefixes: BTreeMap<String, Iri>,
    pub distinct: bool,
    /// Empty means `SELECT *`.
    pub projection: Vec<Projection>,
    pub patterns: Vec<PatternTemplate>,
    pub filters: Vec<Expr>,
    pub group_by: Vec<String>,
    pub order_by: Vec<OrderKey>,
    pub limit: Option<usize>,
    pub offset: Option<usize>,
}

impl Query {
    pub fn is_grouped(&self) -> bool {
        !self.group_by.is_empty() || self.projection.iter().any(|p| matches!(p, Projection::Aggregate(_)))
    }

    pub fn aggregates(&self) -> impl Iterator<Item = &Aggregate> {
        self.projection.iter().filter_map(|p| match p {
            Projection::Aggregate(a) => Some(a),
            Projection::Var(_) => None,
        })
    }

    /// Variables of the WHERE clause in first-occurrence order, excluding
    /// blank-node placeholders.
    pub fn pattern_variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.patterns {
            for x in [&p.s, &p.p, &p.o] {
                if let VarOrTerm::Var(v) = x {
                    if !v.starts_with("_:") && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
        }
        out
    }

    /// Output column names.
    pub fn result_variables(&self) -> Vec<String> {
        if self.projection.is_empty() {
            self.pattern_variables()
        } else {
            self.projection.iter().map(|p| p.name().to_owned()).collect()
        }
    }
}

/// Bag of solutions. `rows[i][j]` binds `variables[j]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionTable {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

impl SolutionTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Value of `var` in row `row`.
    pub fn get(&self, row: usize, var: &str) -> Option<&Term> {
        self.column(var).and_then(|c| self.rows.get(row)?.get(c)?.as_ref())
    }

    /// Rows sorted into a canonical order; handy for bag comparisons.
    pub fn sorted_rows(&self) -> Vec<Vec<Option<Term>>> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }
}
