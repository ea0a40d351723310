use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};

use roc_core::ingest::{apply_mapping, compile_mapping, parse_csv, Source};
use roc_core::ontology::serialize_schema;
use roc_core::rdf::vocab::{codo, roc};
use roc_core::rdf::Iri;
use roc_core::sparql::{evaluate, parse_query, serialize_results, ResultFormat};
use roc_core::store::{materialize, Store};
use roc_core::turtle::{self, Syntax};
use roc_endpoint::{Endpoint, EndpointConfig};

use crate::manifest::{self, RunManifest};
use crate::output::render;
use crate::{
    analyze, kb, Cli, Command, IngestArgs, MaterializeArgs, QueryArgs, ResultFormatArg, SchemaArgs, ServeArgs,
    SourceArg, StatsArgs, ValidateArgs,
};

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let ctx = Ctx { quiet: cli.quiet, manifest: cli.manifest.as_ref().map(Option::as_deref) };
    match &cli.command {
        Command::Ingest(a) => ingest(&ctx, a),
        Command::Materialize(a) => materialize_cmd(&ctx, a),
        Command::Validate(a) => validate(&ctx, a),
        Command::Query(a) => query(&ctx, a),
        Command::Serve(a) => serve(&ctx, a),
        Command::Cq(c) => analyze::run(&ctx, c),
        Command::Stats(a) => stats(&ctx, a),
        Command::Schema(a) => schema(&ctx, a),
    }
}

pub struct Ctx<'a> {
    pub quiet: bool,
    manifest: Option<Option<&'a Path>>,
}

impl Ctx<'_> {
    pub fn progress(&self, msg: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    /// Manifest destination, if `--manifest` was passed.
    pub fn manifest_path(&self, output: Option<&Path>, kb: Option<&Path>, command: &str) -> Option<PathBuf> {
        self.manifest.map(|p| match p {
            Some(p) => p.to_path_buf(),
            None => manifest::default_path(output, kb, command),
        })
    }

    pub fn finish(&self, m: RunManifest, output: Option<&Path>, kb: Option<&Path>) -> Result<()> {
        if let Some(path) = self.manifest_path(output, kb, &m.command) {
            m.write(&path)?;
            self.progress(format_args!("manifest: {}", path.display()));
        }
        Ok(())
    }
}

impl From<ResultFormatArg> for ResultFormat {
    fn from(f: ResultFormatArg) -> Self {
        match f {
            ResultFormatArg::Json => ResultFormat::Json,
            ResultFormatArg::Csv => ResultFormat::Csv,
        }
    }
}

fn ingest(ctx: &Ctx, a: &IngestArgs) -> Result<ExitCode> {
    let preset = match a.source {
        SourceArg::Oxcgrt => Some(Source::Oxcgrt),
        SourceArg::Ecdc => Some(Source::Ecdc),
        SourceArg::Ilo => Some(Source::Ilo),
        SourceArg::Custom => None,
    };
    let document = match (&a.mapping, preset) {
        (Some(path), _) => String::from_utf8(kb::read(path)?).context("mapping is not UTF-8")?,
        (None, Some(src)) => src.preset_document().to_owned(),
        (None, None) => bail!("--source custom requires --mapping"),
    };
    if !a.delimiter.is_ascii() {
        bail!("delimiter must be a single ASCII character");
    }

    let table = parse_csv(&kb::read(&a.csv)?, a.delimiter as u8, b'"')
        .with_context(|| format!("reading {}", a.csv.display()))?;
    let spec = compile_mapping(&document, Some(&table.header)).context("compiling mapping")?;
    let (graph, report) = apply_mapping(&table, &spec)?;
    for (row, message) in &report.errors {
        ctx.progress(format_args!("warning: row {row}: {message}"));
    }

    let store = Store::from_graph(&graph);
    kb::write(&a.out, kb::render_store(&store, &a.out, false).as_bytes())?;
    ctx.progress(format_args!("{report}"));
    ctx.progress(format_args!("wrote {}", a.out.display()));

    let mut m = RunManifest::new("ingest").input(&a.csv)?;
    m.preset = preset.map(|p| p.to_string());
    if let Some(path) = &a.mapping {
        m.mapping = Some(manifest::FileRecord::of(path)?);
    }
    let m = m.counts(store.len(), 0).output(&a.out)?;
    ctx.finish(m, Some(&a.out), None)?;
    Ok(ExitCode::SUCCESS)
}

fn materialize_cmd(ctx: &Ctx, a: &MaterializeArgs) -> Result<ExitCode> {
    let schema = kb::load_schema_from(a.schema.schema.as_deref())?;
    let mut store = kb::load_store(&a.kb)?;
    let asserted = store.len();
    let added = materialize(&mut store, &schema);
    kb::write(&a.out, kb::render_store(&store, &a.out, a.annotate).as_bytes())?;
    ctx.progress(format_args!("asserted: {asserted}, inferred: {added}, total: {}", store.len()));
    ctx.progress(format_args!("wrote {}", a.out.display()));

    let m = RunManifest::new("materialize")
        .input(&a.kb)?
        .schema(a.schema.schema.as_deref())?
        .counts(asserted, added)
        .output(&a.out)?;
    ctx.finish(m, Some(&a.out), None)?;
    Ok(ExitCode::SUCCESS)
}

fn validate(ctx: &Ctx, a: &ValidateArgs) -> Result<ExitCode> {
    let schema = kb::load_schema_from(a.schema.schema.as_deref())?;
    let graph = kb::load_graph(&a.kb)?;
    let report = roc_core::ontology::validate_graph(&graph, &schema);
    if !report.is_empty() {
        let rows: Vec<Vec<String>> =
            report.rows().map(|(rule, subject, msg)| vec![rule.to_owned(), subject, msg.to_owned()]).collect();
        print!("{}", render(&["rule", "subject", "message"], &rows, a.format)?);
    }
    ctx.progress(format_args!("{} violation(s) in {} triples", report.len(), graph.len()));

    let m = RunManifest::new("validate").input(&a.kb)?.schema(a.schema.schema.as_deref())?.counts(graph.len(), 0);
    ctx.finish(m, None, Some(&a.kb))?;
    Ok(if report.is_conforming() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn query(ctx: &Ctx, a: &QueryArgs) -> Result<ExitCode> {
    let text = String::from_utf8(kb::read(&a.query)?).context("query is not UTF-8")?;
    let q = parse_query(&text).with_context(|| format!("in {}", a.query.display()))?;
    let store = kb::load_store(&a.kb)?;
    let table = evaluate(&q, &store);
    let body = serialize_results(&table, a.format.into());
    match &a.out {
        Some(path) => kb::write(path, body.as_bytes())?,
        None => print!("{body}"),
    }
    ctx.progress(format_args!("{} row(s)", table.len()));

    let mut m = RunManifest::new("query").input(&a.kb)?.input(&a.query)?.counts(store.len(), 0);
    if let Some(path) = &a.out {
        m = m.output(path)?;
    }
    ctx.finish(m, a.out.as_deref(), Some(&a.kb))?;
    Ok(ExitCode::SUCCESS)
}

fn serve(ctx: &Ctx, a: &ServeArgs) -> Result<ExitCode> {
    let store = kb::load_store(&a.kb)?;
    let triples = store.len();
    let config = EndpointConfig {
        bind: a.bind.clone(),
        max_query_bytes: a.max_query_bytes,
        default_format: a.default_format.into(),
        request_timeout: Duration::from_millis(a.timeout_ms),
        workers: a.workers,
    };
    let server = Endpoint::new(Arc::new(store), config)?.start()?;
    ctx.finish(RunManifest::new("serve").input(&a.kb)?.counts(triples, 0), None, Some(&a.kb))?;
    ctx.progress(format_args!("serving {triples} triples at http://{}/sparql", server.addr()));
    server.wait();
    Ok(ExitCode::SUCCESS)
}

fn stats(ctx: &Ctx, a: &StatsArgs) -> Result<ExitCode> {
    let schema = kb::load_schema_from(a.schema.schema.as_deref())?;
    let store = kb::load_store(&a.kb)?;
    let s = store.stats();
    let statistics = schema.sub_classes_inclusive(&Iri::new(codo::COUNTRY_WISE_STATISTICS_CLASS)?);
    let countries = schema.sub_classes_inclusive(&Iri::new(roc::COUNTRY)?);
    let rows = [
        ("triples", store.len()),
        ("subjects", s.distinct_subjects),
        ("predicates", s.distinct_predicates),
        ("instances", store.count_instances(&statistics)),
        ("countries", store.count_instances(&countries)),
    ];
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }

    let m = RunManifest::new("stats").input(&a.kb)?.schema(a.schema.schema.as_deref())?.counts(store.len(), 0);
    ctx.finish(m, None, Some(&a.kb))?;
    Ok(ExitCode::SUCCESS)
}

fn schema(ctx: &Ctx, a: &SchemaArgs) -> Result<ExitCode> {
    let graph = serialize_schema(&roc_core::ontology::builtin_roc_schema());
    let syntax = Syntax::from_path(&a.out);
    kb::write(&a.out, turtle::serialize(&graph, syntax).as_bytes())?;
    ctx.progress(format_args!("wrote {} ({} triples)", a.out.display(), graph.len()));
    ctx.finish(RunManifest::new("schema").counts(graph.len(), 0).output(&a.out)?, Some(&a.out), None)?;
    Ok(ExitCode::SUCCESS)
}
