//! `roc`: ingest CSV sources into a ROC knowledge base, materialize the
//! schema entailments, validate, query, serve and answer the competency
//! questions.
//!
//! Exit codes: 0 success, 1 domain failure, 2 usage error.

mod analyze;
mod commands;
mod kb;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "roc", version, about = "Knowledge-base toolkit for the ROC ontology of COVID-19 country responses")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Suppress progress lines on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Write a run manifest (checksums, counts, version). Defaults to
    /// `<output>.manifest.json`, or `<kb>.<command>.manifest.json` for
    /// commands that print to stdout.
    #[arg(long, global = true, num_args = 0..=1, require_equals = true, value_name = "PATH")]
    pub manifest: Option<Option<PathBuf>>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Map a CSV file to N-Triples.
    Ingest(IngestArgs),
    /// Add the triples entailed by the schema.
    Materialize(MaterializeArgs),
    /// Check a KB against the schema; exits 1 on violations.
    Validate(ValidateArgs),
    /// Run a SPARQL query file.
    Query(QueryArgs),
    /// Serve a KB over the SPARQL protocol.
    Serve(ServeArgs),
    /// Competency questions.
    #[command(subcommand)]
    Cq(CqCommand),
    /// Summarize a KB.
    Stats(StatsArgs),
    /// Write the bundled schema as Turtle.
    Schema(SchemaArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceArg {
    Oxcgrt,
    Ecdc,
    Ilo,
    Custom,
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    #[arg(long, value_enum)]
    pub source: SourceArg,
    #[arg(long)]
    pub csv: PathBuf,
    /// JSON mapping document; required for `custom`, overrides a preset otherwise.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
}

#[derive(Args, Debug)]
pub struct SchemaSource {
    /// Schema in Turtle; the bundled ROC schema when absent.
    #[arg(long, env = "ROC_SCHEMA")]
    pub schema: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MaterializeArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[command(flatten)]
    pub schema: SchemaSource,
    #[arg(long)]
    pub out: PathBuf,
    /// Mark inferred triples with a trailing `# inferred` comment.
    #[arg(long)]
    pub annotate: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Table,
    Csv,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[command(flatten)]
    pub schema: SchemaSource,
    #[arg(long, value_enum, default_value_t)]
    pub format: TableFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultFormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ResultFormatArg,
    /// Write results here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long, default_value = "127.0.0.1:3030")]
    pub bind: String,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
    #[arg(long, default_value_t = 64 * 1024)]
    pub max_query_bytes: usize,
    #[arg(long, default_value_t = 8)]
    pub workers: usize,
    /// Result format when the client sends no usable Accept header.
    #[arg(long, value_enum, default_value = "json")]
    pub default_format: ResultFormatArg,
}

#[derive(Args, Debug)]
pub struct CqCommon {
    #[arg(long)]
    pub kb: PathBuf,
    #[command(flatten)]
    pub schema: SchemaSource,
    #[arg(long, value_enum, default_value_t)]
    pub format: TableFormat,
    /// Print the generated SPARQL to stderr.
    #[arg(long)]
    pub show_query: bool,
}

#[derive(Subcommand, Debug)]
pub enum CqCommand {
    /// Which countries establish a response at or above a level?
    #[command(name = "1")]
    One(Cq1Args),
    /// At which incidence does a country adopt a response?
    #[command(name = "2")]
    Two(CqSeriesArgs),
    /// How long does a country keep a response active?
    #[command(name = "3")]
    Three(Cq3Args),
    /// Adoption incidence next to the subsequent case peak.
    #[command(name = "4")]
    Four(CqSeriesArgs),
    /// Lagged correlation between a response and an outcome series.
    #[command(name = "5")]
    Five(Cq5Args),
}

#[derive(Args, Debug)]
pub struct Cq1Args {
    #[command(flatten)]
    pub common: CqCommon,
    /// Indicator code (`h6`), local name or IRI.
    #[arg(long)]
    pub indicator: String,
    #[arg(long, default_value_t = 1.0)]
    pub min_level: f64,
}

#[derive(Args, Debug)]
pub struct CqSeriesArgs {
    #[command(flatten)]
    pub common: CqCommon,
    /// ISO 3166 alpha-3 code or country IRI.
    #[arg(long)]
    pub country: String,
    #[arg(long)]
    pub indicator: String,
    #[arg(long, default_value_t = 1.0)]
    pub level: f64,
    /// Property holding the case counts.
    #[arg(long, default_value = "new_cases")]
    pub cases: String,
    /// Scale cases per 100 000 inhabitants of this population.
    #[arg(long)]
    pub population: Option<f64>,
}

#[derive(Args, Debug)]
pub struct Cq3Args {
    #[command(flatten)]
    pub common: CqCommon,
    #[arg(long)]
    pub country: String,
    #[arg(long)]
    pub indicator: String,
    #[arg(long, default_value_t = 1.0)]
    pub level: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Raw,
    Growth,
}

#[derive(Args, Debug)]
pub struct Cq5Args {
    #[command(flatten)]
    pub common: CqCommon,
    #[arg(long)]
    pub country: String,
    #[arg(long)]
    pub indicator: String,
    /// Outcome property.
    #[arg(long, default_value = "new_cases")]
    pub outcome: String,
    #[arg(long, default_value_t = 14)]
    pub max_lag: u32,
    /// Correlate against raw outcome values or their day-over-day growth.
    #[arg(long, value_enum, default_value = "growth")]
    pub mode: ModeArg,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[command(flatten)]
    pub schema: SchemaSource,
}

#[derive(Args, Debug)]
pub struct SchemaArgs {
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
