//! Numeric values of `xsd:integer`, `xsd:decimal` and `xsd:double` literals.
//!
//! Arithmetic promotes along integer → decimal → double, the same ladder
//! SPARQL uses. Integer overflow promotes to decimal and decimal overflow to
//! double, so sums over large monetary columns never wrap.

use std::cmp::Ordering;
use std::str::FromStr;

use rust_decimal::Decimal;

use super::term::{Literal, RdfError};
use super::vocab::xsd;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Numeric {
    Integer(i64),
    Decimal(Decimal),
    Double(f64),
}

/// The number denoted by a numeric literal.
pub fn numeric_value(literal: &Literal) -> Result<Numeric, RdfError> {
    let lexical = literal.lexical();
    let not_numeric = || RdfError::NotNumeric(literal.datatype().as_str().to_owned());
    match literal.datatype().as_str() {
        xsd::INTEGER => {
            let body = lexical.strip_prefix('+').unwrap_or(lexical);
            match body.parse::<i64>() {
                Ok(v) => Ok(Numeric::Integer(v)),
                Err(_) => parse_decimal(body)
                    .map(Numeric::Decimal)
                    .or_else(|| body.parse::<f64>().ok().map(Numeric::Double))
                    .ok_or_else(not_numeric),
            }
        }
        xsd::DECIMAL => parse_decimal(lexical)
            .map(Numeric::Decimal)
            .or_else(|| {
                // Beyond 28 significant digits: fall back to binary floating point.
                lexical.parse::<f64>().ok().map(Numeric::Double)
            })
            .ok_or_else(not_numeric),
        xsd::DOUBLE => parse_double(lexical).map(Numeric::Double).ok_or_else(not_numeric),
        _ => Err(not_numeric()),
    }
}

fn parse_decimal(lexical: &str) -> Option<Decimal> {
    let body = lexical.strip_prefix('+').unwrap_or(lexical);
    let normalized = match body {
        b if b.ends_with('.') => format!("{b}0"),
        b if b.starts_with('.') => format!("0{b}"),
        b if b.starts_with("-.") => format!("-0{}", &b[1..]),
        b => b.to_owned(),
    };
    Decimal::from_str(&normalized).ok()
}

fn parse_double(lexical: &str) -> Option<f64> {
    match lexical {
        "INF" | "+INF" => Some(f64::INFINITY),
        "-INF" => Some(f64::NEG_INFINITY),
        "NaN" => Some(f64::NAN),
        other => {
            let other = other.strip_prefix('+').unwrap_or(other);
            let fixed = if other.starts_with('.') || other.starts_with("-.") {
                other.replacen('.', "0.", 1)
            } else {
                other.to_owned()
            };
            fixed.parse::<f64>().ok()
        }
    }
}

impl Numeric {
    pub fn to_f64(self) -> f64 {
        match self {
            Numeric::Integer(v) => v as f64,
            Numeric::Decimal(d) => f64::try_from(d).unwrap_or(f64::NAN),
            Numeric::Double(f) => f,
        }
    }

    fn to_decimal(self) -> Option<Decimal> {
        match self {
            Numeric::Integer(v) => Some(Decimal::from(v)),
            Numeric::Decimal(d) => Some(d),
            Numeric::Double(_) => None,
        }
    }

    fn is_double(self) -> bool {
        matches!(self, Numeric::Double(_))
    }

    pub fn plus(self, other: Numeric) -> Numeric {
        match (self, other) {
            (Numeric::Integer(a), Numeric::Integer(b)) => match a.checked_add(b) {
                Some(v) => Numeric::Integer(v),
                None => Numeric::Decimal(Decimal::from(a)).plus(Numeric::Decimal(Decimal::from(b))),
            },
            (a, b) if a.is_double() || b.is_double() => Numeric::Double(a.to_f64() + b.to_f64()),
            (a, b) => {
                let (x, y) = (a.to_decimal().unwrap(), b.to_decimal().unwrap());
                match x.checked_add(y) {
                    Some(v) => Numeric::Decimal(v),
                    None => Numeric::Double(a.to_f64() + b.to_f64()),
                }
            }
        }
    }

    /// Division as SPARQL defines it for AVG: integer / integer yields a decimal.
    /// Returns `None` on division by zero for exact types.
    pub fn checked_div(self, other: Numeric) -> Option<Numeric> {
        if self.is_double() || other.is_double() {
            return Some(Numeric::Double(self.to_f64() / other.to_f64()));
        }
        let (x, y) = (self.to_decimal()?, other.to_decimal()?);
        if y.is_zero() {
            return None;
        }
        Some(match x.checked_div(y) {
            Some(v) => Numeric::Decimal(v),
            None => Numeric::Double(self.to_f64() / other.to_f64()),
        })
    }

    /// Numeric comparison after promotion. `None` only when a NaN is involved.
    pub fn compare(self, other: Numeric) -> Option<Ordering> {
        match (self, other) {
            (Numeric::Integer(a), Numeric::Integer(b)) => Some(a.cmp(&b)),
            (a, b) if a.is_double() || b.is_double() => a.to_f64().partial_cmp(&b.to_f64()),
            (a, b) => Some(a.to_decimal().unwrap().cmp(&b.to_decimal().unwrap())),
        }
    }

    /// Canonical typed literal for this value.
    pub fn to_literal(self) -> Literal {
        match self {
            Numeric::Integer(v) => Literal::integer(v),
            Numeric::Decimal(d) => Literal::typed_unchecked(canonical_decimal(d), xsd::DECIMAL),
            Numeric::Double(f) => Literal::typed_unchecked(canonical_double(f), xsd::DOUBLE),
        }
    }
}

pub(crate) fn canonical_decimal(d: Decimal) -> String {
    if d.is_zero() {
        return "0.0".to_owned();
    }
    let s = d.normalize().to_string();
    if s.contains('.') {
        s
    } else {
        s + ".0"
    }
}

fn canonical_double(f: f64) -> String {
    if f.is_nan() {
        "NaN".to_owned()
    } else if f.is_infinite() {
        if f > 0.0 { "INF" } else { "-INF" }.to_owned()
    } else {
        format!("{f:E}")
    }
}
