//! `roc cq ...`: the competency questions.

use std::process::ExitCode;

use anyhow::{Context, Result};

use roc_core::cq::{self, OutcomeMode, TimeSeries};
use roc_core::ontology::OntologySchema;
use roc_core::rdf::vocab::roc;
use roc_core::rdf::Iri;
use roc_core::store::Store;

use crate::commands::Ctx;
use crate::manifest::RunManifest;
use crate::output::{number, render};
use crate::{kb, CqCommand, CqCommon, ModeArg};

pub fn run(ctx: &Ctx, cmd: &CqCommand) -> Result<ExitCode> {
    let (name, common) = match cmd {
        CqCommand::One(a) => ("cq1", &a.common),
        CqCommand::Two(a) => ("cq2", &a.common),
        CqCommand::Three(a) => ("cq3", &a.common),
        CqCommand::Four(a) => ("cq4", &a.common),
        CqCommand::Five(a) => ("cq5", &a.common),
    };
    let schema = kb::load_schema_from(common.schema.schema.as_deref())?;
    let store = kb::load_store(&common.kb)?;

    let code = match cmd {
        CqCommand::One(a) => {
            let indicator = cq::resolve_indicator(&schema, &a.indicator)?;
            show(common, || cq::cq1_query(&indicator, a.min_level));
            let countries = cq::cq1_countries_with_response(&store, &schema, &indicator, a.min_level)?;
            let rows: Vec<Vec<String>> = countries.iter().map(|c| vec![c.as_str().to_owned()]).collect();
            print!("{}", render(&["country"], &rows, common.format)?);
            ctx.progress(format_args!("{} countr{}", rows.len(), if rows.len() == 1 { "y" } else { "ies" }));
            ExitCode::SUCCESS
        }
        CqCommand::Two(a) => {
            let (response, cases) = series_pair(&store, &schema, common, &a.country, &a.indicator, &a.cases)?;
            let found = match a.population {
                Some(p) => cq::cq2_incidence_per_100k(&response, &cases, a.level, p),
                None => cq::cq2_incidence_at_adoption(&response, &cases, a.level),
            };
            match found {
                Some((date, value)) => {
                    let column = if a.population.is_some() { "incidence_per_100k" } else { "incidence" };
                    let rows = vec![vec![response.country.as_str().to_owned(), date.to_string(), number(value)]];
                    print!("{}", render(&["country", "adoption_date", column], &rows, common.format)?);
                    ExitCode::SUCCESS
                }
                None => no_answer(format_args!(
                    "{} never reaches {} on {} with a case value on or before that date",
                    a.country, a.level, a.indicator
                )),
            }
        }
        CqCommand::Three(a) => {
            let indicator = cq::resolve_indicator(&schema, &a.indicator)?;
            let country = cq::resolve_country(&a.country);
            show(common, || cq::series_query(&country, &indicator));
            let series = cq::extract_series(&store, &country, &indicator)?;
            let rows: Vec<Vec<String>> = cq::cq3_run_lengths(&series, a.level)
                .iter()
                .map(|e| vec![e.start.to_string(), e.end.to_string(), e.days().to_string()])
                .collect();
            print!("{}", render(&["start", "end", "days"], &rows, common.format)?);
            ctx.progress(format_args!("{} episode(s)", rows.len()));
            ExitCode::SUCCESS
        }
        CqCommand::Four(a) => {
            let (response, cases) = series_pair(&store, &schema, common, &a.country, &a.indicator, &a.cases)?;
            match cq::cq4_report(&response, &cases, a.level) {
                Some(r) => {
                    let scale = |v: f64| match a.population {
                        Some(p) if p > 0.0 => v * 100_000.0 / p,
                        _ => v,
                    };
                    let (peak_date, peak) = match r.subsequent_peak {
                        Some((d, v)) => (d.to_string(), number(scale(v))),
                        None => (String::new(), String::new()),
                    };
                    let rows = vec![vec![
                        response.country.as_str().to_owned(),
                        r.adoption_date.to_string(),
                        number(scale(r.incidence_at_adoption)),
                        peak_date,
                        peak,
                    ]];
                    let header = ["country", "adoption_date", "incidence_at_adoption", "peak_date", "peak_incidence"];
                    print!("{}", render(&header, &rows, common.format)?);
                    ExitCode::SUCCESS
                }
                None => no_answer(format_args!("{} never reaches {} on {}", a.country, a.level, a.indicator)),
            }
        }
        CqCommand::Five(a) => {
            let (response, outcome) = series_pair(&store, &schema, common, &a.country, &a.indicator, &a.outcome)?;
            let mode = match a.mode {
                ModeArg::Raw => OutcomeMode::Raw,
                ModeArg::Growth => OutcomeMode::Growth,
            };
            let report = cq::cq5_lagged_correlation(&response, &mode.apply(&outcome), a.max_lag)?;
            let rows: Vec<Vec<String>> = report
                .lags
                .iter()
                .map(|l| {
                    vec![l.lag.to_string(), l.overlap.to_string(), l.r.map(|r| format!("{r:.6}")).unwrap_or_default()]
                })
                .collect();
            print!("{}", render(&["lag", "overlap", "r"], &rows, common.format)?);
            match report.best() {
                Some(best) => ctx.progress(format_args!(
                    "max |r| at lag {} ({mode} outcome): r = {:.6}",
                    best.lag,
                    best.r.unwrap_or(f64::NAN)
                )),
                None => ctx.progress(format_args!("no lag has a defined correlation ({mode} outcome)")),
            }
            ExitCode::SUCCESS
        }
    };

    let m = RunManifest::new(name).input(&common.kb)?.schema(common.schema.schema.as_deref())?.counts(store.len(), 0);
    ctx.finish(m, None, Some(&common.kb))?;
    Ok(code)
}

fn show(common: &CqCommon, query: impl FnOnce() -> String) {
    if common.show_query {
        eprint!("{}", query());
    }
}

fn no_answer(msg: std::fmt::Arguments<'_>) -> ExitCode {
    eprintln!("no data: {msg}");
    ExitCode::from(1)
}

/// An indicator name, or any property by local name or IRI.
fn resolve_property(schema: &OntologySchema, name: &str) -> Result<Iri> {
    if let Ok(iri) = cq::resolve_indicator(schema, name) {
        return Ok(iri);
    }
    let full = if name.contains(':') { name.to_owned() } else { format!("{}{name}", roc::NS) };
    Iri::new(full).with_context(|| format!("bad property {name:?}"))
}

fn series_pair(
    store: &Store,
    schema: &OntologySchema,
    common: &CqCommon,
    country: &str,
    indicator: &str,
    other: &str,
) -> Result<(TimeSeries, TimeSeries)> {
    let indicator = cq::resolve_indicator(schema, indicator)?;
    let other = resolve_property(schema, other)?;
    let country = cq::resolve_country(country);
    show(common, || cq::series_query(&country, &indicator));
    show(common, || cq::series_query(&country, &other));
    Ok((cq::extract_series(store, &country, &indicator)?, cq::extract_series(store, &country, &other)?))
}
