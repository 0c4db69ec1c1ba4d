use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::BenchmarkConfig;
use crate::Failure;

/// Version of the CSV column layouts; bumped whenever a column changes.
pub const CSV_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_hash: &'a str,
    instance_hash: &'a str,
    csv_version: u32,
    partial: bool,
    files: &'a [String],
    notes: &'a [String],
    config: &'a BenchmarkConfig,
}

/// Per-invocation output directory `<out>/<command>-<hash prefix>`.
pub struct OutputDir {
    path: PathBuf,
    command: String,
    config_hash: String,
    instance_hash: String,
    files: Vec<String>,
    notes: Vec<String>,
    partial: bool,
}

impl OutputDir {
    pub fn create(cfg: &BenchmarkConfig, command: &str, instance_hash: &str) -> Result<Self, Failure> {
        let config_hash = cfg.hash(instance_hash);
        let path = cfg.out.join(format!("{command}-{}", &config_hash[..12]));
        fs::create_dir_all(&path).map_err(|e| io_failure(&path, e))?;
        Ok(Self {
            path,
            command: command.to_owned(),
            config_hash,
            instance_hash: instance_hash.to_owned(),
            files: Vec::new(),
            notes: Vec::new(),
            partial: false,
        })
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), Failure> {
        let path = self.path.join(name);
        fs::write(&path, contents).map_err(|e| io_failure(&path, e))?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_owned());
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
        text.push('\n');
        self.write(name, text)
    }

    pub fn write_jsonl<T: Serialize>(&mut self, name: &str, values: &[T]) -> Result<(), Failure> {
        let mut text = String::new();
        for v in values {
            text.push_str(&serde_json::to_string(v).map_err(|e| Failure::Runtime(e.to_string()))?);
            text.push('\n');
        }
        self.write(name, text)
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Failure::Runtime(format!("{name}: {e}"));
        w.write_record(header).map_err(fail)?;
        for row in rows {
            w.write_record(row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Runtime(format!("{name}: {e}")))?;
        self.write(name, bytes)
    }

    pub fn note(&mut self, message: impl Into<String>) {
        let message = message.into();
        eprintln!("warning: {message}");
        self.notes.push(message);
    }

    pub fn mark_partial(&mut self) {
        self.partial = true;
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    /// Writes `manifest.json`, listing every file written so far.
    pub fn finish(self, cfg: &BenchmarkConfig) -> Result<PathBuf, Failure> {
        let manifest = Manifest {
            command: &self.command,
            config_hash: &self.config_hash,
            instance_hash: &self.instance_hash,
            csv_version: CSV_VERSION,
            partial: self.partial,
            files: &self.files,
            notes: &self.notes,
            config: cfg,
        };
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Runtime(e.to_string()))?;
        text.push('\n');
        let path = self.path.join("manifest.json");
        fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
        Ok(self.path)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

/// Formats a float for CSV output with round-trip precision.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
