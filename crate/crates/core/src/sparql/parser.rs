use std::collections::BTreeMap;

use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Iri, Literal, Term};

use super::lexer::{tokenize, Tok, Token};
use super::{
    Aggregate, AggregateFn, CompareOp, Expr, OrderKey, PatternTemplate, Projection, Query, QueryError, VarOrTerm,
};

/// Parses the supported SELECT subset. Prefixed names are resolved here, so
/// an undeclared prefix fails with `UnknownPrefix`.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let tokens = tokenize(text)?;
    let (mut line, mut column) = (1, 1);
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    let mut p = Parser { tokens, pos: 0, end: (line, column), query: Query::default() };
    p.query()?;
    validate(&p.query)?;
    Ok(p.query)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    query: Query,
}

fn unsupported(name: &str) -> QueryError {
    QueryError::UnsupportedFeature(name.to_owned())
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + n).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => self.end,
        };
        let mut message = message.into();
        if self.pos >= self.tokens.len() {
            message.push_str(" (found end of input)");
        }
        QueryError::Syntax { line, column, message }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(word))
    }

    fn eat_word(&mut self, word: &str) -> bool {
        let hit = self.is_word(word);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{p}'")))
        }
    }

    fn expect_var(&mut self) -> Result<String, QueryError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn query(&mut self) -> Result<(), QueryError> {
        loop {
            if self.eat_word("PREFIX") {
                let name = match self.next() {
                    Some(Tok::PName(prefix, local)) if local.is_empty() => prefix,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected a prefix name such as 'roc:'"));
                    }
                };
                let iri = match self.next() {
                    Some(Tok::Iri(iri)) => Iri::new(iri).map_err(|e| {
                        self.pos -= 1;
                        self.error(e.to_string())
                    })?,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected an IRI after the prefix name"));
                    }
                };
                self.query.prefixes.insert(name, iri);
            } else if self.is_word("BASE") {
                return Err(unsupported("BASE"));
            } else {
                break;
            }
        }

        for form in ["ASK", "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR"] {
            if self.is_word(form) {
                return Err(unsupported(form));
            }
        }
        if !self.eat_word("SELECT") {
            return Err(self.error("expected SELECT"));
        }
        if self.eat_word("DISTINCT") {
            self.query.distinct = true;
        } else if self.is_word("REDUCED") {
            return Err(unsupported("REDUCED"));
        }
        self.projection()?;
        if self.is_word("FROM") {
            return Err(unsupported("FROM"));
        }
        self.eat_word("WHERE");
        self.expect_punct("{")?;
        self.group()?;
        self.modifiers()?;
        if self.is_word("VALUES") {
            return Err(unsupported("VALUES"));
        }
        if self.peek().is_some() {
            return Err(self.error("unexpected token after the query"));
        }
        Ok(())
    }

    fn projection(&mut self) -> Result<(), QueryError> {
        if self.eat_punct("*") {
            return Ok(());
        }
        loop {
            match self.peek() {
                Some(Tok::Var(v)) => {
                    let v = v.clone();
                    self.pos += 1;
                    self.query.projection.push(Projection::Var(v));
                }
                Some(Tok::Word(w)) if w.parse::<AggregateFn>().is_ok() => {
                    let mut agg = self.aggregate()?;
                    agg.alias = match &agg.var {
                        Some(v) => format!("{}_{v}", agg.func.name().to_ascii_lowercase()),
                        None => agg.func.name().to_ascii_lowercase(),
                    };
                    self.query.projection.push(Projection::Aggregate(agg));
                }
                Some(Tok::Word(w)) if ["SAMPLE", "GROUP_CONCAT"].iter().any(|f| w.eq_ignore_ascii_case(f)) => {
                    return Err(unsupported(&w.to_ascii_uppercase()));
                }
                Some(Tok::Punct("(")) => {
                    self.pos += 1;
                    let is_agg = matches!(self.peek(), Some(Tok::Word(w)) if w.parse::<AggregateFn>().is_ok());
                    if !is_agg {
                        return Err(unsupported("expressions in SELECT"));
                    }
                    let mut agg = self.aggregate()?;
                    if !self.eat_word("AS") {
                        return Err(self.error("expected AS"));
                    }
                    agg.alias = self.expect_var()?;
                    self.expect_punct(")")?;
                    self.query.projection.push(Projection::Aggregate(agg));
                }
                _ => break,
            }
        }
        if self.query.projection.is_empty() {
            return Err(self.error("expected '*', a variable or an aggregate after SELECT"));
        }
        Ok(())
    }

    fn aggregate(&mut self) -> Result<Aggregate, QueryError> {
        let func = match self.next() {
            Some(Tok::Word(w)) => w.parse::<AggregateFn>().expect("checked by caller"),
            _ => unreachable!("caller checked for an aggregate name"),
        };
        self.expect_punct("(")?;
        let distinct = self.eat_word("DISTINCT");
        let var = if func == AggregateFn::Count && self.eat_punct("*") {
            None
        } else {
            match self.peek() {
                Some(Tok::Var(_)) => Some(self.expect_var()?),
                Some(_) => return Err(unsupported("aggregates over expressions")),
                None => return Err(self.error("expected a variable")),
            }
        };
        if self.eat_punct(";") {
            return Err(unsupported("aggregate SEPARATOR"));
        }
        self.expect_punct(")")?;
        Ok(Aggregate { func, var, distinct, alias: String::new() })
    }

    fn group(&mut self) -> Result<(), QueryError> {
        loop {
            match self.peek() {
                None => return Err(self.error("expected '}'")),
                Some(Tok::Punct("}")) => {
                    self.pos += 1;
                    return Ok(());
                }
                Some(Tok::Punct(".")) => {
                    self.pos += 1;
                }
                Some(Tok::Punct("{")) => return Err(self.nested_group()),
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("FILTER") => {
                    self.pos += 1;
                    let e = if self.is_punct("(") { self.primary()? } else { self.call()? };
                    self.query.filters.push(e);
                }
                Some(Tok::Word(w))
                    if ["OPTIONAL", "UNION", "MINUS", "BIND", "VALUES", "SERVICE", "GRAPH"]
                        .iter()
                        .any(|k| w.eq_ignore_ascii_case(k)) =>
                {
                    return Err(unsupported(&w.to_ascii_uppercase()));
                }
                Some(_) => {
                    self.triples()?;
                    if !(self.is_punct(".") || self.is_punct("}") || matches!(self.peek(), Some(Tok::Word(_)))) {
                        return Err(self.error("expected '.' or '}' after triple pattern"));
                    }
                }
            }
        }
    }

    /// Names the unsupported construct behind a nested `{`.
    fn nested_group(&mut self) -> QueryError {
        if matches!(self.peek_at(1), Some(Tok::Word(w)) if w.eq_ignore_ascii_case("SELECT")) {
            return unsupported("subqueries");
        }
        let mut depth = 0usize;
        let mut i = self.pos;
        while let Some(t) = self.tokens.get(i) {
            match t.tok {
                Tok::Punct("{") => depth += 1,
                Tok::Punct("}") => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        match self.tokens.get(i + 1).map(|t| &t.tok) {
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("UNION") => unsupported("UNION"),
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("MINUS") => unsupported("MINUS"),
            _ => unsupported("nested group patterns"),
        }
    }

    fn triples(&mut self) -> Result<(), QueryError> {
        let subject = self.node(false)?;
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.node(true)?;
                self.query.patterns.push(PatternTemplate { s: subject.clone(), p: predicate.clone(), o: object });
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                return Ok(());
            }
            while self.eat_punct(";") {}
            if self.is_punct(".") || self.is_punct("}") {
                return Ok(());
            }
        }
    }

    fn predicate(&mut self) -> Result<VarOrTerm, QueryError> {
        if self.is_punct("^") {
            return Err(unsupported("property paths"));
        }
        let p = match self.peek() {
            Some(Tok::Word(w)) if w == "a" => {
                self.pos += 1;
                VarOrTerm::Term(Term::Iri(Iri::new(rdf::TYPE).expect("valid")))
            }
            Some(Tok::Var(_)) => VarOrTerm::Var(self.expect_var()?),
            Some(Tok::Iri(_) | Tok::PName(..)) => VarOrTerm::Term(Term::Iri(self.iri()?)),
            _ => return Err(self.error("expected a predicate")),
        };
        if ["/", "|", "*", "+"].iter().any(|p| self.is_punct(p)) {
            return Err(unsupported("property paths"));
        }
        Ok(p)
    }

    fn node(&mut self, allow_literal: bool) -> Result<VarOrTerm, QueryError> {
        match self.peek() {
            Some(Tok::Var(_)) => Ok(VarOrTerm::Var(self.expect_var()?)),
            Some(Tok::BlankNode(label)) => {
                let v = format!("_:{label}");
                self.pos += 1;
                Ok(VarOrTerm::Var(v))
            }
            Some(Tok::Iri(_) | Tok::PName(..)) => Ok(VarOrTerm::Term(Term::Iri(self.iri()?))),
            Some(Tok::Punct("[")) | Some(Tok::Punct("(")) => Err(unsupported("blank node syntax")),
            Some(Tok::Str(_) | Tok::Number(_)) | Some(Tok::Word(_)) if allow_literal => {
                Ok(VarOrTerm::Term(Term::Literal(self.literal()?)))
            }
            _ => Err(self.error(if allow_literal { "expected an object" } else { "expected a subject" })),
        }
    }

    fn iri(&mut self) -> Result<Iri, QueryError> {
        match self.peek().cloned() {
            Some(Tok::Iri(text)) => {
                let iri = Iri::new(text).map_err(|e| self.error(e.to_string()))?;
                self.pos += 1;
                Ok(iri)
            }
            Some(Tok::PName(prefix, local)) => {
                let ns = self.query.prefixes.get(&prefix).ok_or_else(|| QueryError::UnknownPrefix(prefix.clone()))?;
                let iri = Iri::new(format!("{}{local}", ns.as_str())).map_err(|e| self.error(e.to_string()))?;
                self.pos += 1;
                Ok(iri)
            }
            _ => Err(self.error("expected an IRI")),
        }
    }

    fn literal(&mut self) -> Result<Literal, QueryError> {
        let start = self.pos;
        let lit = match self.next() {
            Some(Tok::Str(s)) => match self.peek() {
                Some(Tok::LangTag(tag)) => {
                    let tag = tag.clone();
                    self.pos += 1;
                    Literal::lang_string(s, &tag)
                }
                Some(Tok::Punct("^^")) => {
                    self.pos += 1;
                    let dt = self.iri()?;
                    Literal::new(s, dt, None)
                }
                _ => Ok(Literal::string(s)),
            },
            Some(Tok::Number(n)) => {
                let dt = if n.contains(['e', 'E']) {
                    xsd::DOUBLE
                } else if n.contains('.') {
                    xsd::DECIMAL
                } else {
                    xsd::INTEGER
                };
                Literal::new(n, Iri::new(dt).expect("valid"), None)
            }
            Some(Tok::Word(w)) if w == "true" || w == "false" => Ok(Literal::boolean(w == "true")),
            _ => {
                self.pos = start;
                return Err(self.error("expected a literal"));
            }
        };
        lit.map_err(|e| {
            self.pos = start;
            self.error(e.to_string())
        })
    }

    fn expr(&mut self) -> Result<Expr, QueryError> {
        let mut left = self.and_expr()?;
        while self.eat_punct("||") {
            let right = self.and_expr()?;
            left = Expr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expr, QueryError> {
        let mut left = self.relational()?;
        while self.eat_punct("&&") {
            let right = self.relational()?;
            left = Expr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn relational(&mut self) -> Result<Expr, QueryError> {
        let left = self.unary()?;
        let op = match self.peek() {
            Some(Tok::Punct("<")) => CompareOp::Lt,
            Some(Tok::Punct("<=")) => CompareOp::Le,
            Some(Tok::Punct("=")) => CompareOp::Eq,
            Some(Tok::Punct("!=")) => CompareOp::Ne,
            Some(Tok::Punct(">=")) => CompareOp::Ge,
            Some(Tok::Punct(">")) => CompareOp::Gt,
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("IN") => return Err(unsupported("IN")),
            Some(Tok::Number(n)) if n.starts_with(['+', '-']) => return Err(unsupported("arithmetic")),
            _ => return Ok(left),
        };
        self.pos += 1;
        let right = self.unary()?;
        Ok(Expr::Compare(op, Box::new(left), Box::new(right)))
    }

    fn unary(&mut self) -> Result<Expr, QueryError> {
        if self.eat_punct("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        let e = self.primary()?;
        if ["+", "-", "*", "/"].iter().any(|p| self.is_punct(p)) {
            return Err(unsupported("arithmetic"));
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, QueryError> {
        match self.peek() {
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            Some(Tok::Var(_)) => Ok(Expr::Var(self.expect_var()?)),
            Some(Tok::Iri(_) | Tok::PName(..)) => {
                if matches!(self.peek_at(1), Some(Tok::Punct("("))) {
                    return Err(unsupported("function calls"));
                }
                Ok(Expr::Const(Term::Iri(self.iri()?)))
            }
            Some(Tok::Str(_) | Tok::Number(_)) => Ok(Expr::Const(Term::Literal(self.literal()?))),
            Some(Tok::Word(w)) if w == "true" || w == "false" => Ok(Expr::Const(Term::Literal(self.literal()?))),
            Some(Tok::Word(_)) => self.call(),
            _ => Err(self.error("expected an expression")),
        }
    }

    /// `bound(?x)`; any other function name is reported as unsupported.
    fn call(&mut self) -> Result<Expr, QueryError> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("BOUND") => {
                self.pos += 1;
                self.expect_punct("(")?;
                let v = self.expect_var()?;
                self.expect_punct(")")?;
                Ok(Expr::Bound(v))
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("EXISTS") || w.eq_ignore_ascii_case("NOT") => {
                Err(unsupported("EXISTS"))
            }
            Some(Tok::Word(w)) if matches!(self.peek_at(1), Some(Tok::Punct("("))) => {
                Err(unsupported(&format!("function {}", w.to_ascii_uppercase())))
            }
            _ => Err(self.error("expected an expression")),
        }
    }

    fn modifiers(&mut self) -> Result<(), QueryError> {
        if self.eat_word("GROUP") {
            if !self.eat_word("BY") {
                return Err(self.error("expected BY"));
            }
            while let Some(Tok::Var(_)) = self.peek() {
                let v = self.expect_var()?;
                self.query.group_by.push(v);
            }
            if self.is_punct("(") {
                return Err(unsupported("GROUP BY expressions"));
            }
            if self.query.group_by.is_empty() {
                return Err(self.error("expected a variable after GROUP BY"));
            }
        }
        if self.is_word("HAVING") {
            return Err(unsupported("HAVING"));
        }
        if self.eat_word("ORDER") {
            if !self.eat_word("BY") {
                return Err(self.error("expected BY"));
            }
            loop {
                let key = if self.eat_word("ASC") {
                    OrderKey { expr: self.bracketed()?, descending: false }
                } else if self.eat_word("DESC") {
                    OrderKey { expr: self.bracketed()?, descending: true }
                } else if matches!(self.peek(), Some(Tok::Var(_))) {
                    OrderKey { expr: Expr::Var(self.expect_var()?), descending: false }
                } else if self.is_punct("(") {
                    OrderKey { expr: self.bracketed()?, descending: false }
                } else {
                    break;
                };
                self.query.order_by.push(key);
            }
            if self.query.order_by.is_empty() {
                return Err(self.error("expected an ordering key after ORDER BY"));
            }
        }
        for _ in 0..2 {
            if self.eat_word("LIMIT") {
                self.query.limit = Some(self.count()?);
            } else if self.eat_word("OFFSET") {
                self.query.offset = Some(self.count()?);
            }
        }
        Ok(())
    }

    fn bracketed(&mut self) -> Result<Expr, QueryError> {
        self.expect_punct("(")?;
        let e = self.expr()?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn count(&mut self) -> Result<usize, QueryError> {
        match self.peek() {
            Some(Tok::Number(n)) if n.bytes().all(|b| b.is_ascii_digit()) => {
                let v = n.parse().map_err(|_| self.error("number too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a non-negative integer")),
        }
    }
}

fn validate(q: &Query) -> Result<(), QueryError> {
    let mut names: BTreeMap<&str, ()> = BTreeMap::new();
    for p in &q.projection {
        if names.insert(p.name(), ()).is_some() {
            return Err(QueryError::Invalid(format!("?{} is projected twice", p.name())));
        }
    }
    if q.is_grouped() {
        if q.projection.is_empty() {
            return Err(QueryError::Invalid("SELECT * cannot be combined with GROUP BY".into()));
        }
        for p in &q.projection {
            if let Projection::Var(v) = p {
                if !q.group_by.contains(v) {
                    return Err(QueryError::Invalid(format!("?{v} is projected but not grouped")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEALTH_QUERY: &str = include_str!("../../assets/queries/health_aggregates.rq");

    #[test]
    fn health_aggregates_shape() {
        let q = parse_query(HEALTH_QUERY).unwrap();
        let plain = q.projection.iter().filter(|p| matches!(p, Projection::Var(_))).count();
        assert_eq!(plain, 1);
        assert_eq!(q.aggregates().count(), 5);
        assert_eq!(q.patterns.len(), 6);
        assert_eq!(q.group_by, ["country"]);
        assert_eq!(
            q.result_variables(),
            [
                "country",
                "avg_testing_policy",
                "avg_contact_tracing",
                "sum_investment_healthcare",
                "sum_investment_in_vaccines",
                "avg_facial_coverings"
            ]
        );
        // `;` lists share the subject.
        assert!(q.patterns[1..].iter().all(|p| p.s == VarOrTerm::Var("stats".into())));
    }

    #[test]
    fn minimal_and_standard_aggregates() {
        let q = parse_query("SELECT ?s WHERE { ?s ?p ?o }").unwrap();
        assert_eq!(q.patterns.len(), 1);
        assert_eq!(q.projection, [Projection::Var("s".into())]);
        let q = parse_query(
            "SELECT ?s (COUNT(*) AS ?n) (AVG(?o) AS ?m) { ?s ?p ?o } GROUP BY ?s ORDER BY DESC(?n) LIMIT 2 OFFSET 1",
        )
        .unwrap();
        assert_eq!(q.result_variables(), ["s", "n", "m"]);
        assert_eq!((q.limit, q.offset), (Some(2), Some(1)));
        assert!(q.order_by[0].descending);
    }

    #[test]
    fn filters() {
        let q = parse_query(
            "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> SELECT * WHERE { ?s ?p ?o . FILTER(?o >= 2 && !bound(?x) || ?o = \"2020-04-01\"^^xsd:date) FILTER bound(?s) }",
        )
        .unwrap();
        assert_eq!(q.filters.len(), 2);
        assert!(matches!(q.filters[0], Expr::Or(..)));
        assert_eq!(q.filters[1], Expr::Bound("s".into()));
    }

    #[test]
    fn unsupported_features() {
        for (text, name) in [
            ("SELECT ?s WHERE { OPTIONAL { ?s ?p ?o } }", "OPTIONAL"),
            ("SELECT ?s WHERE { { ?s ?p ?o } UNION { ?s ?q ?o } }", "UNION"),
            ("SELECT ?s WHERE { { SELECT ?s WHERE { ?s ?p ?o } } }", "subqueries"),
            ("SELECT ?s WHERE { ?s ?p ?o BIND(1 AS ?x) }", "BIND"),
            ("SELECT ?s WHERE { ?s <urn:a>/<urn:b> ?o }", "property paths"),
            ("SELECT ?s WHERE { ?s ?p ?o FILTER(regex(?o, \"x\")) }", "function REGEX"),
            ("ASK { ?s ?p ?o }", "ASK"),
        ] {
            assert_eq!(parse_query(text), Err(QueryError::UnsupportedFeature(name.into())), "{text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_query("SELEC ?s WHERE { ?s ?p ?o }") {
            Err(QueryError::Syntax { line: 1, column: 1, message }) => assert!(message.contains("SELECT")),
            other => panic!("{other:?}"),
        }
        match parse_query("SELECT ?s WHERE {\n  ?s ?p \n") {
            Err(QueryError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_query("SELECT ?s WHERE { ?s roc:x ?o }"), Err(QueryError::UnknownPrefix("roc".into())));
        assert!(matches!(parse_query("SELECT ?s ?o { ?s ?p ?o } GROUP BY ?s"), Err(QueryError::Invalid(_))));
    }
}
