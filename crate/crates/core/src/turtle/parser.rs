use std::collections::BTreeMap;

use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};

use super::{ParseDiagnostic, Syntax, SyntaxError};

pub(super) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    syntax: Syntax,
    prefixes: BTreeMap<String, Iri>,
    graph: Graph,
}

type Result<T> = std::result::Result<T, SyntaxError>;

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, syntax: Syntax) -> Self {
        Parser { src, pos: 0, syntax, prefixes: BTreeMap::new(), graph: Graph::new() }
    }

    pub(super) fn run(mut self) -> Result<Graph> {
        loop {
            self.skip_ws();
            if self.at_end() {
                break;
            }
            self.statement()?;
        }
        for (name, ns) in self.prefixes {
            self.graph.add_prefix(name, ns);
        }
        Ok(self.graph)
    }

    fn is_turtle(&self) -> bool {
        self.syntax == Syntax::Turtle
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(offset)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> SyntaxError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = before[line_start..].chars().count() + 1;
        SyntaxError(ParseDiagnostic { line, column, message: message.into() })
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        self.error_at(self.pos, message)
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        match self.peek() {
            None => self.error(format!("unexpected end of input, expected {expected}")),
            Some(c) => self.error(format!("unexpected {c:?}, expected {expected}")),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn statement(&mut self) -> Result<()> {
        if self.is_turtle() {
            if self.rest().starts_with("@prefix") {
                self.pos += "@prefix".len();
                self.prefix_decl()?;
                return self.expect('.', "'.' after @prefix declaration");
            }
            if self.rest().starts_with('@') {
                return Err(self.error("unsupported directive (only @prefix is supported)"));
            }
            let word = self.peek_word();
            if word.eq_ignore_ascii_case("PREFIX") {
                self.pos += word.len();
                return self.prefix_decl();
            }
            if word.eq_ignore_ascii_case("BASE") {
                return Err(self.error("BASE directives are not supported"));
            }
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)?;
        self.expect('.', "'.' at end of statement")
    }

    fn prefix_decl(&mut self) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        let word = self.read_word();
        let Some(name) = word.strip_suffix(':') else {
            return Err(self.error_at(start, "expected prefix name ending in ':'"));
        };
        if !name.is_empty() && !is_valid_prefix_name(name) {
            return Err(self.error_at(start, format!("invalid prefix name {name:?}")));
        }
        self.skip_ws();
        let ns = self.iriref()?;
        self.prefixes.insert(name.to_owned(), ns);
        Ok(())
    }

    fn subject(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::BlankNode(self.blank_node()?)),
            Some('[') | Some('(') => Err(self.error("anonymous blank nodes and collections are not supported")),
            Some('"') | Some('\'') => Err(self.error("a literal cannot be a subject")),
            Some(_) if self.is_turtle() => {
                let start = self.pos;
                let word = self.read_word();
                if word.contains(':') {
                    Ok(Term::Iri(self.resolve_pname(word, start)?))
                } else {
                    Err(self.error_at(start, format!("expected subject, found {word:?}")))
                }
            }
            _ => Err(self.unexpected("subject")),
        }
    }

    fn verb(&mut self) -> Result<Iri> {
        self.skip_ws();
        match self.peek() {
            Some('<') => self.iriref(),
            Some(_) if self.is_turtle() => {
                let start = self.pos;
                let word = self.read_word();
                if word == "a" {
                    Ok(Iri::from_static(rdf::TYPE))
                } else if word.contains(':') {
                    self.resolve_pname(word, start)
                } else if word.is_empty() {
                    Err(self.unexpected("predicate"))
                } else {
                    Err(self.error_at(start, format!("expected predicate, found {word:?}")))
                }
            }
            _ => Err(self.unexpected("predicate")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<()> {
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                let triple =
                    Triple::new(subject.clone(), predicate.clone(), object).map_err(|e| self.error(e.to_string()))?;
                self.graph.insert(triple);
                self.skip_ws();
                if self.is_turtle() && self.peek() == Some(',') {
                    self.bump();
                    continue;
                }
                break;
            }
            self.skip_ws();
            if !(self.is_turtle() && self.peek() == Some(';')) {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if self.peek() == Some('.') {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::BlankNode(self.blank_node()?)),
            Some('"') => self.quoted_literal('"'),
            Some('\'') if self.is_turtle() => self.quoted_literal('\''),
            Some('[') | Some('(') if self.is_turtle() => {
                Err(self.error("anonymous blank nodes and collections are not supported"))
            }
            Some(c) if self.is_turtle() && (c.is_ascii_digit() || matches!(c, '+' | '-' | '.')) => {
                self.numeric_literal()
            }
            Some(_) if self.is_turtle() => {
                let start = self.pos;
                let word = self.read_word();
                match word {
                    "true" | "false" => Ok(Term::Literal(Literal::boolean(word == "true"))),
                    w if w.contains(':') => Ok(Term::Iri(self.resolve_pname(w, start)?)),
                    "" => Err(self.unexpected("object")),
                    w => Err(self.error_at(start, format!("expected object, found {w:?}"))),
                }
            }
            _ => Err(self.unexpected("object")),
        }
    }

    fn iriref(&mut self) -> Result<Iri> {
        let start = self.pos;
        if self.peek() != Some('<') {
            return Err(self.unexpected("'<'"));
        }
        self.bump();
        let body_start = self.pos;
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') => {
                    return Err(self.error(format!("character {c:?} not allowed in IRI")));
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        let body = &self.src[body_start..self.pos];
        self.bump();
        Iri::new(body).map_err(|_| self.error_at(start, format!("not an absolute IRI: <{body}>")))
    }

    fn blank_node(&mut self) -> Result<BlankNode> {
        let start = self.pos;
        self.pos += 2; // "_:"
        let label_start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                self.bump();
            } else {
                break;
            }
        }
        while self.src[label_start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        let label = &self.src[label_start..self.pos];
        if label.is_empty() || label.starts_with(['-', '.']) {
            return Err(self.error_at(start, "invalid blank node label"));
        }
        BlankNode::new(label).map_err(|e| self.error_at(start, e.to_string()))
    }

    fn peek_word(&self) -> &'a str {
        let rest = self.rest();
        let end = rest.char_indices().find(|(_, c)| !is_word_char(*c)).map_or(rest.len(), |(i, _)| i);
        let mut word = &rest[..end];
        while word.ends_with('.') {
            word = &word[..word.len() - 1];
        }
        word
    }

    fn read_word(&mut self) -> &'a str {
        let word = self.peek_word();
        self.pos += word.len();
        word
    }

    fn resolve_pname(&self, word: &str, start: usize) -> Result<Iri> {
        let (prefix, local) = word.split_once(':').expect("caller checked ':'");
        let ns =
            self.prefixes.get(prefix).ok_or_else(|| self.error_at(start, format!("undeclared prefix {prefix:?}")))?;
        Iri::new(format!("{}{}", ns.as_str(), local))
            .map_err(|_| self.error_at(start, format!("prefixed name {word:?} does not form an IRI")))
    }

    fn quoted_literal(&mut self, quote: char) -> Result<Term> {
        let start = self.pos;
        self.bump();
        if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
            return Err(self.error_at(start, "long (triple-quoted) strings are not supported"));
        }
        let mut value = String::new();
        loop {
            let here = self.pos;
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some(c) if c == quote => break,
                Some('\n') | Some('\r') => return Err(self.error_at(here, "line break inside string literal")),
                Some('\\') => value.push(self.escape(here)?),
                Some(c) => value.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let tag_start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let tag = &self.src[tag_start..self.pos];
                Literal::lang_string(value, tag)
                    .map(Term::Literal)
                    .map_err(|_| self.error_at(tag_start, format!("invalid language tag {tag:?}")))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.pos += 2;
                let dt_start = self.pos;
                let datatype = if self.peek() == Some('<') {
                    self.iriref()?
                } else if self.is_turtle() {
                    let word = self.read_word();
                    if !word.contains(':') {
                        return Err(self.error_at(dt_start, "expected datatype IRI"));
                    }
                    self.resolve_pname(word, dt_start)?
                } else {
                    return Err(self.unexpected("datatype IRI"));
                };
                let dt_text = datatype.as_str().to_owned();
                Literal::new(value, datatype, None)
                    .map(Term::Literal)
                    .map_err(|_| self.error_at(start, format!("lexical form is not valid for datatype <{dt_text}>")))
            }
            _ => Ok(Term::Literal(Literal::string(value))),
        }
    }

    fn escape(&mut self, start: usize) -> Result<char> {
        match self.bump() {
            Some('t') => Ok('\t'),
            Some('n') => Ok('\n'),
            Some('r') => Ok('\r'),
            Some('"') => Ok('"'),
            Some('\\') => Ok('\\'),
            Some('u') => {
                let high = self.hex4(start)?;
                if (0xD800..0xDC00).contains(&high) {
                    if self.rest().starts_with("\\u") {
                        self.pos += 2;
                        let low = self.hex4(start)?;
                        if (0xDC00..0xE000).contains(&low) {
                            let code = 0x10000 + ((high - 0xD800) << 10) + (low - 0xDC00);
                            return char::from_u32(code).ok_or_else(|| self.error_at(start, "invalid escape"));
                        }
                    }
                    return Err(self.error_at(start, "unpaired surrogate in \\u escape"));
                }
                char::from_u32(high).ok_or_else(|| self.error_at(start, "invalid \\u escape"))
            }
            Some(c) => Err(self.error_at(start, format!("unsupported escape sequence \\{c}"))),
            None => Err(self.error("unterminated escape sequence")),
        }
    }

    fn hex4(&mut self, start: usize) -> Result<u32> {
        let digits = self.rest().get(..4).ok_or_else(|| self.error_at(start, "truncated \\u escape"))?;
        if !digits.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(self.error_at(start, "invalid \\u escape"));
        }
        let value = u32::from_str_radix(digits, 16).map_err(|_| self.error_at(start, "invalid \\u escape"))?;
        self.pos += 4;
        Ok(value)
    }

    fn numeric_literal(&mut self) -> Result<Term> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.bump();
        }
        let mut digits = self.eat_digits();
        let mut has_dot = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            has_dot = true;
            digits += self.eat_digits();
        }
        let mut has_exp = false;
        if matches!(self.peek(), Some('e') | Some('E')) && digits > 0 {
            let save = self.pos;
            self.bump();
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.bump();
            }
            if self.eat_digits() == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent in numeric literal"));
            }
            has_exp = true;
        }
        if digits == 0 {
            return Err(self.error_at(start, "expected a number"));
        }
        let lexical = &self.src[start..self.pos];
        let datatype = if has_exp {
            xsd::DOUBLE
        } else if has_dot {
            xsd::DECIMAL
        } else {
            xsd::INTEGER
        };
        Literal::new(lexical, Iri::from_static(datatype), None)
            .map(Term::Literal)
            .map_err(|e| self.error_at(start, e.to_string()))
    }

    fn eat_digits(&mut self) -> usize {
        let mut n = 0;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            n += 1;
        }
        n
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')
}

pub(super) fn is_valid_prefix_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_alphabetic())
        && name.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !name.ends_with('.')
}
