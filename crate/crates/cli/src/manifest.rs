//! Reproducibility record written next to a command's output.

use std::path::{Path, PathBuf};

use anyhow::Result;
use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::kb;

#[derive(Debug, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileRecord {
    pub fn of(path: &Path) -> Result<Self> {
        let data = kb::read(path)?;
        Ok(FileRecord { path: path.display().to_string(), bytes: data.len() as u64, sha256: sha256_hex(&data) })
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Counts {
    pub asserted: usize,
    pub inferred: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub timestamp: String,
    pub inputs: Vec<FileRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mapping: Option<FileRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub counts: Counts,
    pub outputs: Vec<FileRecord>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_owned(),
            timestamp: timestamp(),
            inputs: Vec::new(),
            preset: None,
            mapping: None,
            schema: None,
            counts: Counts::default(),
            outputs: Vec::new(),
        }
    }

    pub fn input(mut self, path: &Path) -> Result<Self> {
        self.inputs.push(FileRecord::of(path)?);
        Ok(self)
    }

    pub fn schema(mut self, path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => {
                self.schema = Some(p.display().to_string());
                self.input(p)
            }
            None => {
                self.schema = Some("builtin".into());
                Ok(self)
            }
        }
    }

    pub fn counts(mut self, asserted: usize, inferred: usize) -> Self {
        self.counts = Counts { asserted, inferred };
        self
    }

    pub fn output(mut self, path: &Path) -> Result<Self> {
        self.outputs.push(FileRecord::of(path)?);
        Ok(self)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        kb::write(path, json.as_bytes())
    }
}

/// Where `--manifest` writes when given without a path: next to the output,
/// or next to the KB for commands that print to stdout.
pub fn default_path(output: Option<&Path>, kb: Option<&Path>, command: &str) -> PathBuf {
    let with_suffix = |p: &Path, suffix: &str| {
        let mut s = p.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    match (output, kb) {
        (Some(out), _) => with_suffix(out, ".manifest.json"),
        (None, Some(kb)) => with_suffix(kb, &format!(".{command}.manifest.json")),
        (None, None) => PathBuf::from(format!("roc-{command}.manifest.json")),
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// RFC 3339 UTC. Honors `SOURCE_DATE_EPOCH` for reproducible builds.
fn timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_abc() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn default_paths() {
        assert_eq!(
            default_path(Some(Path::new("out/kb.nt")), None, "ingest"),
            PathBuf::from("out/kb.nt.manifest.json")
        );
        assert_eq!(default_path(None, Some(Path::new("kb.nt")), "stats"), PathBuf::from("kb.nt.stats.manifest.json"));
    }
}
