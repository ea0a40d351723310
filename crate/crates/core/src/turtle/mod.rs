//! Turtle and N-Triples concrete syntaxes.
//!
//! The Turtle subset covers prefixed names, `a`, `;`/`,` lists, numeric and
//! boolean shorthand, typed and language-tagged literals, comments and
//! labelled blank nodes. Collections `( )`, anonymous blank nodes `[ ]`,
//! long strings and `@base` are rejected with a diagnostic.

mod parser;
mod serializer;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    Turtle,
    NTriples,
}

impl Syntax {
    /// Guesses the syntax from a file extension (`.nt` → N-Triples, otherwise Turtle).
    pub fn from_path(path: &std::path::Path) -> Syntax {
        match path.extension().and_then(|e| e.to_str()) {
            Some("nt") => Syntax::NTriples,
            _ => Syntax::Turtle,
        }
    }
}

impl FromStr for Syntax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "turtle" | "ttl" => Ok(Syntax::Turtle),
            "ntriples" | "n-triples" | "nt" => Ok(Syntax::NTriples),
            other => Err(format!("unknown RDF syntax {other:?}")),
        }
    }
}

/// Location of a syntax error, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {0}")]
pub struct SyntaxError(pub ParseDiagnostic);

pub fn parse(text: &str, syntax: Syntax) -> Result<Graph, SyntaxError> {
    parser::Parser::new(text, syntax).run()
}

/// Turtle output groups triples by subject; N-Triples output is sorted and
/// byte-stable for equal graphs.
pub fn serialize(graph: &Graph, syntax: Syntax) -> String {
    match syntax {
        Syntax::Turtle => serializer::turtle(graph),
        Syntax::NTriples => serializer::ntriples(graph),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::xsd;
    use crate::rdf::{BlankNode, Iri, Literal, Term, Triple};

    const ROC: &str = "http://qurator-csi.de/ontologies/covid/responses#";

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn empty_input() {
        assert!(parse("", Syntax::Turtle).unwrap().is_empty());
        assert!(parse("  # only a comment\n", Syntax::NTriples).unwrap().is_empty());
    }

    #[test]
    fn prefixed_integer_object() {
        let text =
            "@prefix roc: <http://qurator-csi.de/ontologies/covid/responses#> . <urn:s> roc:h6_facial_coverings 0 .";
        let g = parse(text, Syntax::Turtle).unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.predicate().as_str(), format!("{ROC}h6_facial_coverings"));
        let lit = t.object().as_literal().unwrap();
        assert_eq!((lit.lexical(), lit.datatype().as_str()), ("0", xsd::INTEGER));
        assert_eq!(g.prefixes()["roc"].as_str(), ROC);
    }

    #[test]
    fn truncated_input_reports_position() {
        let err = parse("<urn:s> <urn:p> ", Syntax::Turtle).unwrap_err();
        assert_eq!((err.0.line, err.0.column), (1, 17));
        assert!(err.0.message.contains("end of input"), "{}", err.0.message);
        let err = parse("<urn:s> <urn:p> <urn:o> .\n<urn:s> <urn:p>\n  \"x", Syntax::NTriples).unwrap_err();
        assert_eq!(err.0.line, 3);
    }

    #[test]
    fn turtle_features() {
        let text = r#"
            @prefix roc: <http://qurator-csi.de/ontologies/covid/responses#> .
            PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
            # comment
            roc:s a roc:ResponseStatistics ;
                roc:h2_testing_policy 2 , 3 ;
                roc:h4 1.50 ;
                roc:x 1.5e3 ;
                roc:flag true ;
                roc:label "Sweden"@en , "tab\there \u00e9" ;
                roc:date "2020-04-01"^^xsd:date ;
                roc:b _:node1 ;
                .
            _:node1 <urn:p> roc:o.
        "#;
        let g = parse(text, Syntax::Turtle).unwrap();
        assert_eq!(g.len(), 11);
        let objects: Vec<String> = g.iter().map(|t| t.object().to_string()).collect();
        assert!(objects.contains(&format!("\"1.50\"^^<{}>", xsd::DECIMAL)));
        assert!(objects.contains(&format!("\"1.5e3\"^^<{}>", xsd::DOUBLE)));
        assert!(objects.contains(&format!("\"true\"^^<{}>", xsd::BOOLEAN)));
        assert!(objects.contains(&"\"tab\\there é\"".to_owned()));
        assert!(objects.contains(&"\"Sweden\"@en".to_owned()));
    }

    #[test]
    fn unsupported_constructs_are_errors() {
        for text in [
            "<urn:s> <urn:p> [ <urn:q> 1 ] .",
            "<urn:s> <urn:p> ( 1 2 ) .",
            "<urn:s> <urn:p> \"\"\"long\"\"\" .",
            "<urn:s> <urn:p> \"bad \\a escape\" .",
            "@base <http://x/> .",
            "<urn:s> <urn:p> undeclared:x .",
            "<relative> <urn:p> 1 .",
            "<urn:s> <urn:p> \"abc\"^^<http://www.w3.org/2001/XMLSchema#integer> .",
        ] {
            assert!(parse(text, Syntax::Turtle).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn ntriples_rejects_turtle_shorthand() {
        for text in [
            "<urn:s> <urn:p> 1 .",
            "<urn:s> a <urn:C> .",
            "<urn:s> <urn:p> <urn:o> ; <urn:q> <urn:o> .",
            "@prefix x: <urn:x#> .",
        ] {
            assert!(parse(text, Syntax::NTriples).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn ntriples_single_typed_literal_line() {
        let mut g = Graph::new();
        g.insert(Triple::new(iri("urn:s"), iri(&format!("{ROC}h6_facial_coverings")), Literal::integer(0)).unwrap());
        let out = serialize(&g, Syntax::NTriples);
        assert_eq!(
            out,
            format!("<urn:s> <{ROC}h6_facial_coverings> \"0\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n")
        );
    }

    #[test]
    fn empty_graph_serialization() {
        let mut g = Graph::new();
        assert_eq!(serialize(&g, Syntax::NTriples), "");
        assert_eq!(serialize(&g, Syntax::Turtle), "");
        g.add_prefix("roc", iri(ROC));
        assert_eq!(serialize(&g, Syntax::Turtle), format!("@prefix roc: <{ROC}> .\n"));
    }

    #[test]
    fn turtle_groups_by_subject() {
        let mut g = Graph::new();
        g.add_prefix("roc", iri(ROC));
        let s = iri(&format!("{ROC}s"));
        g.insert(Triple::new(s.clone(), iri(&format!("{ROC}p")), Literal::integer(1)).unwrap());
        g.insert(Triple::new(s.clone(), iri(&format!("{ROC}p")), Literal::integer(2)).unwrap());
        g.insert(Triple::new(s.clone(), iri(&format!("{ROC}q")), Literal::string("x\"y")).unwrap());
        let out = serialize(&g, Syntax::Turtle);
        assert_eq!(out, format!("@prefix roc: <{ROC}> .\n\nroc:s roc:p 1 , 2 ;\n    roc:q \"x\\\"y\" .\n"));
        assert_eq!(parse(&out, Syntax::Turtle).unwrap(), g);
    }

    #[test]
    fn awkward_lexicals_survive_turtle() {
        let mut g = Graph::new();
        let s = Term::BlankNode(BlankNode::new("b.1").unwrap());
        let p = iri("urn:p");
        for (lex, dt) in [
            ("1.", xsd::DECIMAL),
            ("+.5", xsd::DECIMAL),
            ("1.e5", xsd::DOUBLE),
            ("-0", xsd::INTEGER),
            ("1", xsd::BOOLEAN),
        ] {
            g.insert(Triple::new(s.clone(), p.clone(), Literal::new(lex, iri(dt), None).unwrap()).unwrap());
        }
        g.insert(Triple::new(s.clone(), p.clone(), Literal::string("\u{1}\r\n\u{1F600}")).unwrap());
        for syntax in [Syntax::Turtle, Syntax::NTriples] {
            let back = parse(&serialize(&g, syntax), syntax).unwrap();
            assert_eq!(back, g, "{syntax:?}");
        }
    }

    #[test]
    fn surrogate_pair_escape() {
        let g = parse("<urn:s> <urn:p> \"\\uD83D\\uDE00\" .", Syntax::NTriples).unwrap();
        assert_eq!(g.iter().next().unwrap().object().as_literal().unwrap().lexical(), "\u{1F600}");
        assert!(parse("<urn:s> <urn:p> \"\\uD83D\" .", Syntax::NTriples).is_err());
    }
}
