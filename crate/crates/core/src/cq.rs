//! Competency-question analytics: generated SPARQL for set-valued questions
//! and time-series post-processing for the rest.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use thiserror::Error;

use crate::ontology::OntologySchema;
use crate::rdf::vocab::{codo, roc};
use crate::rdf::{numeric_value, Iri, Term};
use crate::sparql::{evaluate, parse_query, QueryError};
use crate::store::Store;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CqError {
    #[error("unknown indicator {0:?}")]
    UnknownIndicator(String),
    #[error("no data for {property} of {country}")]
    NoData { country: String, property: String },
    #[error("two points share the date {0}")]
    DuplicateDate(NaiveDate),
    #[error("non-finite value on {0}")]
    NonFinite(NaiveDate),
    #[error("no lag has at least 3 overlapping dates")]
    InsufficientOverlap,
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// Date-indexed values of one property for one country.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub country: Iri,
    pub indicator: Iri,
    points: Vec<(NaiveDate, f64)>,
}

impl TimeSeries {
    /// Sorts `points` by date. Fails on repeated dates and non-finite values.
    pub fn new(country: Iri, indicator: Iri, mut points: Vec<(NaiveDate, f64)>) -> Result<Self, CqError> {
        points.sort_by_key(|&(d, _)| d);
        if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(CqError::DuplicateDate(w[0].0));
        }
        if let Some(&(d, _)) = points.iter().find(|(_, v)| !v.is_finite()) {
            return Err(CqError::NonFinite(d));
        }
        Ok(TimeSeries { country, indicator, points })
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn value_at(&self, date: NaiveDate) -> Option<f64> {
        self.points.binary_search_by_key(&date, |&(d, _)| d).ok().map(|i| self.points[i].1)
    }

    /// Relative day-over-day change `(v[t] - v[t-1]) / v[t-1]`. Defined only
    /// where the previous calendar day exists with a nonzero value.
    pub fn growth(&self) -> TimeSeries {
        let points = self
            .points
            .windows(2)
            .filter(|w| w[0].0.succ_opt() == Some(w[1].0) && w[0].1 != 0.0)
            .map(|w| (w[1].0, (w[1].1 - w[0].1) / w[0].1))
            .collect();
        TimeSeries { country: self.country.clone(), indicator: self.indicator.clone(), points }
    }
}

/// How the outcome series enters the lagged correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutcomeMode {
    Raw,
    #[default]
    Growth,
}

impl OutcomeMode {
    pub fn apply(self, series: &TimeSeries) -> TimeSeries {
        match self {
            OutcomeMode::Raw => series.clone(),
            OutcomeMode::Growth => series.growth(),
        }
    }
}

impl FromStr for OutcomeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(OutcomeMode::Raw),
            "growth" => Ok(OutcomeMode::Growth),
            other => Err(format!("unknown outcome mode {other:?} (expected raw or growth)")),
        }
    }
}

impl fmt::Display for OutcomeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeMode::Raw => "raw",
            OutcomeMode::Growth => "growth",
        })
    }
}

/// Inclusive run of dates meeting a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Episode {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub level: f64,
}

impl Episode {
    pub fn days(&self) -> i64 {
        (self.end - self.start).num_days() + 1
    }
}

/// Accepts an indicator code (`h6`), a local name
/// (`h6_facial_coverings`) or a full IRI.
pub fn resolve_indicator(schema: &OntologySchema, name: &str) -> Result<Iri, CqError> {
    if let Some(def) = schema.indicator(&name.to_ascii_lowercase()) {
        return Ok(def.property_iri.clone());
    }
    let full = if name.contains(':') { name.to_owned() } else { format!("{}{name}", roc::NS) };
    schema
        .indicators
        .iter()
        .find(|d| d.property_iri.as_str() == full)
        .map(|d| d.property_iri.clone())
        .ok_or_else(|| CqError::UnknownIndicator(name.to_owned()))
}

/// Accepts an ISO 3166 alpha-3 code (`SWE`) or a full IRI.
pub fn resolve_country(name: &str) -> Iri {
    if name.contains(':') {
        if let Ok(iri) = Iri::new(name) {
            return iri;
        }
    }
    Iri::new(format!("{}{}", crate::rdf::vocab::COUNTRY_DATA_NS, name.to_ascii_uppercase()))
        .unwrap_or_else(|_| Iri::new(crate::rdf::vocab::COUNTRY_DATA_NS).expect("valid"))
}

fn sparql_number(x: f64) -> String {
    // Debug keeps a decimal point (or exponent), so the literal is never an integer.
    format!("{x:?}")
}

/// The SPARQL text behind [`cq1_countries_with_response`].
pub fn cq1_query(indicator: &Iri, min_level: f64) -> String {
    format!(
        "PREFIX roc: <{roc}>\nPREFIX codo: <{codo}>\nSELECT DISTINCT ?country WHERE {{\n    ?country codo:countryWiseStatistics ?stats .\n    ?stats a roc:ResponseStatistics ;\n        <{p}> ?level .\n    FILTER(?level >= {min})\n}}\nORDER BY ?country\n",
        roc = roc::NS,
        codo = codo::NS,
        p = indicator.as_str(),
        min = sparql_number(min_level),
    )
}

/// Countries with at least one response-statistics instance where
/// `indicator` is at least `min_level`.
pub fn cq1_countries_with_response(
    store: &Store,
    schema: &OntologySchema,
    indicator: &Iri,
    min_level: f64,
) -> Result<BTreeSet<Iri>, CqError> {
    if schema.indicator_for_property(indicator).is_none() {
        return Err(CqError::UnknownIndicator(indicator.as_str().to_owned()));
    }
    let table = evaluate(&parse_query(&cq1_query(indicator, min_level))?, store);
    Ok(table.rows.into_iter().filter_map(|mut r| r.swap_remove(0)?.as_iri().cloned()).collect())
}

/// The SPARQL text behind [`extract_series`].
pub fn series_query(country: &Iri, property: &Iri) -> String {
    format!(
        "PREFIX roc: <{roc}>\nPREFIX codo: <{codo}>\nSELECT ?date ?value WHERE {{\n    <{c}> codo:countryWiseStatistics ?stats .\n    ?stats roc:date ?date ;\n        <{p}> ?value .\n}}\nORDER BY ?date\n",
        roc = roc::NS,
        codo = codo::NS,
        c = country.as_str(),
        p = property.as_str(),
    )
}

/// Dated numeric values of `property` over the statistics of `country`.
/// Non-numeric values and malformed dates are skipped.
pub fn extract_series(store: &Store, country: &Iri, property: &Iri) -> Result<TimeSeries, CqError> {
    let table = evaluate(&parse_query(&series_query(country, property))?, store);
    let points: Vec<(NaiveDate, f64)> = table
        .rows
        .iter()
        .filter_map(|row| {
            let date = row[0].as_ref()?.as_literal()?.as_date()?;
            let value = match row[1].as_ref()? {
                Term::Literal(l) => numeric_value(l).ok()?.to_f64(),
                _ => return None,
            };
            Some((date, value))
        })
        .collect();
    if points.is_empty() {
        return Err(CqError::NoData { country: country.as_str().to_owned(), property: property.as_str().to_owned() });
    }
    TimeSeries::new(country.clone(), property.clone(), points)
}

/// Case value on `date`, or at the nearest earlier date with a point.
fn value_on_or_before(series: &TimeSeries, date: NaiveDate) -> Option<(NaiveDate, f64)> {
    let i = series.points.partition_point(|&(d, _)| d <= date);
    i.checked_sub(1).map(|i| series.points[i])
}

/// First date on which the response reaches `level`, with the case value
/// on that date (or the nearest earlier one). `None` when the level is never
/// reached or no case value precedes adoption.
pub fn cq2_incidence_at_adoption(response: &TimeSeries, cases: &TimeSeries, level: f64) -> Option<(NaiveDate, f64)> {
    let &(date, _) = response.points.iter().find(|&&(_, v)| v >= level)?;
    let (_, value) = value_on_or_before(cases, date)?;
    Some((date, value))
}

/// [`cq2_incidence_at_adoption`] with cases scaled per 100 000 inhabitants.
pub fn cq2_incidence_per_100k(
    response: &TimeSeries,
    cases: &TimeSeries,
    level: f64,
    population: f64,
) -> Option<(NaiveDate, f64)> {
    if population <= 0.0 || !population.is_finite() {
        return None;
    }
    cq2_incidence_at_adoption(response, cases, level).map(|(d, v)| (d, v * 100_000.0 / population))
}

/// Maximal runs of consecutive calendar days with value at least `level`.
/// A missing day ends a run.
pub fn cq3_run_lengths(series: &TimeSeries, level: f64) -> Vec<Episode> {
    let mut out: Vec<Episode> = Vec::new();
    let mut current: Option<Episode> = None;
    for &(date, value) in &series.points {
        if value >= level {
            match current.as_mut() {
                Some(e) if e.end.checked_add_days(Days::new(1)) == Some(date) => e.end = date,
                _ => {
                    out.extend(current.take());
                    current = Some(Episode { start: date, end: date, level });
                }
            }
        } else {
            out.extend(current.take());
        }
    }
    out.extend(current);
    out
}

/// Adoption incidence next to what happened afterwards. Descriptive only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cq4Report {
    pub adoption_date: NaiveDate,
    pub incidence_at_adoption: f64,
    /// Largest case value strictly after adoption, if any.
    pub subsequent_peak: Option<(NaiveDate, f64)>,
}

pub fn cq4_report(response: &TimeSeries, cases: &TimeSeries, level: f64) -> Option<Cq4Report> {
    let (adoption_date, incidence_at_adoption) = cq2_incidence_at_adoption(response, cases, level)?;
    let subsequent_peak = cases.points.iter().filter(|&&(d, _)| d > adoption_date).copied().fold(
        None,
        |best: Option<(NaiveDate, f64)>, p| match best {
            Some(b) if b.1 >= p.1 => Some(b),
            _ => Some(p),
        },
    );
    Some(Cq4Report { adoption_date, incidence_at_adoption, subsequent_peak })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagCorrelation {
    pub lag: u32,
    pub overlap: usize,
    /// `None` with fewer than 3 overlapping dates or zero variance.
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagReport {
    pub lags: Vec<LagCorrelation>,
    /// Lag with the largest |r|; the earliest wins ties.
    pub best_lag: Option<u32>,
}

impl LagReport {
    pub fn best(&self) -> Option<&LagCorrelation> {
        self.best_lag.and_then(|k| self.lags.iter().find(|l| l.lag == k))
    }
}

/// Sample Pearson correlation; `None` below 3 points or with zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 3 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson r between `response(t)` and `outcome(t + k)` for each lag
/// `k in 0..=max_lag`, over dates present in both.
pub fn cq5_lagged_correlation(response: &TimeSeries, outcome: &TimeSeries, max_lag: u32) -> Result<LagReport, CqError> {
    let outcome_at: BTreeMap<NaiveDate, f64> = outcome.points.iter().copied().collect();
    let mut lags = Vec::with_capacity(max_lag as usize + 1);
    for lag in 0..=max_lag {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for &(d, x) in &response.points {
            let Some(shifted) = d.checked_add_days(Days::new(u64::from(lag))) else { continue };
            if let Some(&y) = outcome_at.get(&shifted) {
                xs.push(x);
                ys.push(y);
            }
        }
        lags.push(LagCorrelation { lag, overlap: xs.len(), r: pearson(&xs, &ys) });
    }
    if lags.iter().all(|l| l.overlap < 3) {
        return Err(CqError::InsufficientOverlap);
    }
    let mut best: Option<(u32, f64)> = None;
    for l in &lags {
        if let Some(r) = l.r {
            if best.map_or(true, |(_, b)| r.abs() > b.abs()) {
                best = Some((l.lag, r));
            }
        }
    }
    Ok(LagReport { lags, best_lag: best.map(|(k, _)| k) })
}
