use std::fmt::Write;

use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{escape_string, is_integer_lexical, Graph, Iri, Literal, Term};

use super::parser::is_valid_prefix_name;

/// One triple per line, in `compare_terms` order on (subject, predicate, object).
pub(super) fn ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for t in graph {
        writeln!(out, "{t}").expect("writing to a String");
    }
    out
}

pub(super) fn turtle(graph: &Graph) -> String {
    let prefixes: Vec<(&str, &str)> = graph
        .prefixes()
        .iter()
        .filter(|(name, _)| name.is_empty() || is_valid_prefix_name(name))
        .map(|(name, ns)| (name.as_str(), ns.as_str()))
        .collect();
    let mut out = String::new();
    for (name, ns) in &prefixes {
        writeln!(out, "@prefix {name}: <{ns}> .").expect("writing to a String");
    }
    let writer = TermWriter { prefixes: &prefixes };

    let mut current_subject: Option<&Term> = None;
    let mut current_predicate: Option<&Iri> = None;
    for t in graph {
        if current_subject != Some(t.subject()) {
            if current_subject.is_some() {
                out.push_str(" .\n");
            }
            if current_subject.is_some() || !prefixes.is_empty() {
                out.push('\n');
            }
            writer.term(&mut out, t.subject());
            out.push(' ');
            writer.predicate(&mut out, t.predicate());
            out.push(' ');
            current_subject = Some(t.subject());
            current_predicate = Some(t.predicate());
        } else if current_predicate != Some(t.predicate()) {
            out.push_str(" ;\n    ");
            writer.predicate(&mut out, t.predicate());
            out.push(' ');
            current_predicate = Some(t.predicate());
        } else {
            out.push_str(" , ");
        }
        writer.term(&mut out, t.object());
    }
    if current_subject.is_some() {
        out.push_str(" .\n");
    }
    out
}

struct TermWriter<'a> {
    prefixes: &'a [(&'a str, &'a str)],
}

impl TermWriter<'_> {
    fn predicate(&self, out: &mut String, p: &Iri) {
        if p.as_str() == rdf::TYPE {
            out.push('a');
        } else {
            self.iri(out, p);
        }
    }

    fn iri(&self, out: &mut String, iri: &Iri) {
        let text = iri.as_str();
        let best = self
            .prefixes
            .iter()
            .filter(|(_, ns)| text.starts_with(ns) && is_safe_local(&text[ns.len()..]))
            .max_by_key(|(_, ns)| ns.len());
        match best {
            Some((name, ns)) => {
                out.push_str(name);
                out.push(':');
                out.push_str(&text[ns.len()..]);
            }
            None => {
                out.push('<');
                out.push_str(text);
                out.push('>');
            }
        }
    }

    fn term(&self, out: &mut String, term: &Term) {
        match term {
            Term::Iri(iri) => self.iri(out, iri),
            Term::BlankNode(b) => write!(out, "{b}").expect("writing to a String"),
            Term::Literal(l) => self.literal(out, l),
        }
    }

    fn literal(&self, out: &mut String, l: &Literal) {
        let lex = l.lexical();
        let bare = match l.datatype().as_str() {
            xsd::INTEGER => is_integer_lexical(lex),
            xsd::DECIMAL => is_turtle_decimal(lex),
            xsd::DOUBLE => is_turtle_double(lex),
            xsd::BOOLEAN => lex == "true" || lex == "false",
            _ => false,
        };
        if bare {
            out.push_str(lex);
            return;
        }
        out.push('"');
        out.push_str(&escape_string(lex));
        out.push('"');
        if let Some(lang) = l.lang() {
            out.push('@');
            out.push_str(lang);
        } else if !l.is_string() {
            out.push_str("^^");
            self.iri(out, l.datatype());
        }
    }
}

/// Local names this writer is willing to emit in prefixed form; the parser's
/// word scanner accepts all of them.
fn is_safe_local(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let first_ok = local.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_');
    first_ok
        && local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !local.ends_with('.')
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn digits(s: &str) -> bool {
    s.bytes().all(|b| b.is_ascii_digit())
}

/// Turtle DECIMAL: `[+-]? [0-9]* '.' [0-9]+`.
fn is_turtle_decimal(s: &str) -> bool {
    match strip_sign(s).split_once('.') {
        Some((int, frac)) => digits(int) && !frac.is_empty() && digits(frac),
        None => false,
    }
}

/// Turtle DOUBLE: mantissa with mandatory exponent.
fn is_turtle_double(s: &str) -> bool {
    let body = strip_sign(s);
    let Some(e) = body.find(['e', 'E']) else {
        return false;
    };
    let (mantissa, exponent) = (&body[..e], &body[e + 1..]);
    let mantissa_ok = match mantissa.split_once('.') {
        Some((int, frac)) => digits(int) && !frac.is_empty() && digits(frac),
        None => !mantissa.is_empty() && digits(mantissa),
    };
    let exp = strip_sign(exponent);
    mantissa_ok && !exp.is_empty() && digits(exp)
}
