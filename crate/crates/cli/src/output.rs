//! Atomic file output and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir.display(), e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path.display(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path.display(), e.error))?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

/// Header row first, even when there are no rows.
pub fn csv_bytes<R: Serialize>(header: &[&str], rows: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(format!("csv: {e}")))?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(format!("csv: {e}")))?;
    }
    w.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub args: serde_json::Value,
    pub seed: u64,
    pub rng_name: String,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<OutputDigest>,
}

/// Collects the data files of one run and writes them with a manifest.
pub struct Run {
    command: String,
    args: serde_json::Value,
    seed: u64,
    started_at: String,
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl Run {
    pub fn start(command: &str, args: serde_json::Value, seed: u64, dir: &Path) -> Self {
        Run {
            command: command.to_string(),
            args,
            seed,
            started_at: now(),
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    /// Writes every data file, then `manifest.json`. Returns the paths written.
    pub fn finish(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let mut outputs = Vec::new();
        for (name, bytes) in &self.files {
            let path = self.dir.join(name);
            write_atomic(&path, bytes)?;
            outputs.push(OutputDigest {
                file: name.clone(),
                sha256: hex::encode(Sha256::digest(bytes)),
            });
            written.push(path);
        }
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            command: self.command,
            args: self.args,
            seed: self.seed,
            rng_name: hperc::RNG_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: self.started_at,
            finished_at: now(),
            outputs,
        };
        let path = self.dir.join("manifest.json");
        write_atomic(&path, &json_bytes(&manifest))?;
        written.push(path);
        Ok(written)
    }
}
