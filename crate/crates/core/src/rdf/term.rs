use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

use super::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("malformed IRI: {0:?}")]
    MalformedIri(String),
    #[error("lexical form {lexical:?} is not valid for datatype <{datatype}>")]
    DatatypeMismatch { lexical: String, datatype: String },
    #[error("language tag {lang:?} conflicts with datatype <{datatype}>")]
    LangConflict { lang: String, datatype: String },
    #[error("literal with datatype <{0}> is not numeric")]
    NotNumeric(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNodeLabel(String),
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
}

/// An absolute IRI. Stored verbatim: no case folding, no percent-decoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        if is_valid_iri(&text) {
            Ok(Iri(text))
        } else {
            Err(RdfError::MalformedIri(text))
        }
    }

    /// For compile-time vocabulary constants that are known to be valid.
    pub(crate) fn from_static(text: &'static str) -> Self {
        debug_assert!(is_valid_iri(text), "invalid vocabulary IRI {text}");
        Iri(text.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// Builds an [`Iri`] after checking the scheme and the forbidden characters.
pub fn make_iri(text: &str) -> Result<Iri, RdfError> {
    Iri::new(text)
}

fn is_valid_iri(text: &str) -> bool {
    let Some(colon) = text.find(':') else {
        return false;
    };
    let scheme = &text[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return false;
    }
    // Characters that IRIREF excludes in Turtle/N-Triples.
    !text.chars().any(|c| c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        let first_ok = label.chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_');
        let rest_ok = label.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if first_ok && rest_ok && !label.ends_with('.') {
            Ok(BlankNode(label))
        } else {
            Err(RdfError::InvalidBlankNodeLabel(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal. Field order matters: the derived ordering compares
/// (datatype, lexical, lang).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    datatype: Iri,
    lexical: String,
    lang: Option<String>,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Iri, lang: Option<&str>) -> Result<Self, RdfError> {
        let lexical = lexical.into();
        let is_lang_string = datatype.as_str() == rdf::LANG_STRING;
        match lang {
            Some(tag) if !is_lang_string => {
                return Err(RdfError::LangConflict { lang: tag.to_owned(), datatype: datatype.into_string() })
            }
            Some(tag) if !is_valid_lang_tag(tag) => {
                return Err(RdfError::LangConflict { lang: tag.to_owned(), datatype: datatype.into_string() })
            }
            None if is_lang_string => {
                return Err(RdfError::LangConflict { lang: String::new(), datatype: datatype.into_string() })
            }
            _ => {}
        }
        if !lexical_matches_datatype(&lexical, datatype.as_str()) {
            return Err(RdfError::DatatypeMismatch { lexical, datatype: datatype.into_string() });
        }
        Ok(Literal { datatype, lexical, lang: lang.map(str::to_owned) })
    }

    pub fn string(value: impl Into<String>) -> Self {
        Literal { datatype: Iri::from_static(xsd::STRING), lexical: value.into(), lang: None }
    }

    pub fn lang_string(value: impl Into<String>, lang: &str) -> Result<Self, RdfError> {
        Literal::new(value, Iri::from_static(rdf::LANG_STRING), Some(lang))
    }

    pub fn integer(value: i64) -> Self {
        Literal { datatype: Iri::from_static(xsd::INTEGER), lexical: value.to_string(), lang: None }
    }

    pub fn boolean(value: bool) -> Self {
        Literal { datatype: Iri::from_static(xsd::BOOLEAN), lexical: value.to_string(), lang: None }
    }

    pub fn date(value: NaiveDate) -> Self {
        Literal { datatype: Iri::from_static(xsd::DATE), lexical: value.format("%Y-%m-%d").to_string(), lang: None }
    }

    /// Skips validation; only for lexical forms produced by this crate's own
    /// canonical formatters.
    pub(crate) fn typed_unchecked(lexical: String, datatype: &'static str) -> Self {
        Literal { datatype: Iri::from_static(datatype), lexical, lang: None }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    pub fn is_string(&self) -> bool {
        self.datatype.as_str() == xsd::STRING
    }

    /// The calendar date for `xsd:date` literals (timezone suffix ignored).
    pub fn as_date(&self) -> Option<NaiveDate> {
        if self.datatype.as_str() == xsd::DATE {
            parse_xsd_date(&self.lexical)
        } else {
            None
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        if self.datatype.as_str() != xsd::BOOLEAN {
            return None;
        }
        match self.lexical.as_str() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        match &self.lang {
            Some(lang) => write!(f, "@{lang}"),
            None if self.is_string() => Ok(()),
            None => write!(f, "^^{}", self.datatype),
        }
    }
}

/// Builds a validated [`Literal`].
pub fn make_literal(lexical: &str, datatype: &Iri, lang: Option<&str>) -> Result<Literal, RdfError> {
    Literal::new(lexical, datatype.clone(), lang)
}

fn is_valid_lang_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first_ok =
        parts.next().is_some_and(|p| !p.is_empty() && p.len() <= 8 && p.chars().all(|c| c.is_ascii_alphabetic()));
    first_ok && parts.all(|p| !p.is_empty() && p.len() <= 8 && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

pub(crate) fn lexical_matches_datatype(lexical: &str, datatype: &str) -> bool {
    match datatype {
        xsd::INTEGER => is_integer_lexical(lexical),
        xsd::DECIMAL => is_decimal_lexical(lexical),
        xsd::DOUBLE => is_double_lexical(lexical),
        xsd::BOOLEAN => matches!(lexical, "true" | "false" | "1" | "0"),
        xsd::DATE => parse_xsd_date(lexical).is_some(),
        _ => true,
    }
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_integer_lexical(s: &str) -> bool {
    all_digits(strip_sign(s))
}

pub(crate) fn is_decimal_lexical(s: &str) -> bool {
    let body = strip_sign(s);
    match body.split_once('.') {
        None => all_digits(body),
        Some((int, frac)) => {
            (int.is_empty() || all_digits(int))
                && (frac.is_empty() || all_digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
    }
}

pub(crate) fn is_double_lexical(s: &str) -> bool {
    if matches!(s, "INF" | "+INF" | "-INF" | "NaN") {
        return true;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    is_decimal_lexical(mantissa) && exponent.map_or(true, is_integer_lexical)
}

pub(crate) fn parse_xsd_date(s: &str) -> Option<NaiveDate> {
    // YYYY-MM-DD with an optional timezone (Z or +hh:mm / -hh:mm).
    if s.len() < 10 || !s.is_char_boundary(10) {
        return None;
    }
    let (date, tz) = s.split_at(10);
    let valid_tz = match tz {
        "" | "Z" => true,
        _ => {
            let b = tz.as_bytes();
            b.len() == 6
                && (b[0] == b'+' || b[0] == b'-')
                && b[1].is_ascii_digit()
                && b[2].is_ascii_digit()
                && b[3] == b':'
                && b[4].is_ascii_digit()
                && b[5].is_ascii_digit()
        }
    };
    let b = date.as_bytes();
    if !valid_tz || b[4] != b'-' || b[7] != b'-' {
        return None;
    }
    NaiveDate::parse_from_str(date, "%Y-%m-%d").ok()
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}

/// An RDF term. Variant order gives the total order
/// `BlankNode < Iri < Literal`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    BlankNode(BlankNode),
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::BlankNode(b) => b.fmt(f),
            Term::Iri(i) => i.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(value: Iri) -> Self {
        Term::Iri(value)
    }
}

impl From<BlankNode> for Term {
    fn from(value: BlankNode) -> Self {
        Term::BlankNode(value)
    }
}

impl From<Literal> for Term {
    fn from(value: Literal) -> Self {
        Term::Literal(value)
    }
}

/// Total order over terms: kind first, then lexicographic within kind.
pub fn compare_terms(a: &Term, b: &Term) -> std::cmp::Ordering {
    a.cmp(b)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>) -> Result<Self, RdfError> {
        let subject = subject.into();
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject);
        }
        Ok(Triple { subject, predicate, object: object.into() })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
