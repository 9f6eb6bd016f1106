//! Run directories: summary.json, ledger.json, CSV sidecars and a manifest with file hashes.

use crate::config::RunConfig;
use crate::error::Result;
use crate::ledger::Ledger;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// Numeric CSV table written with round-trip precision.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|x| format!("{x:?}")))?;
        }
        w.into_inner().map_err(|e| crate::error::Error::Io(e.into_error()))
    }
}

/// Everything a command produces before it touches the disk.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub command: String,
    pub summary: serde_json::Value,
    pub ledger: Ledger,
    pub tables: Vec<(String, Table)>,
    /// scalar results collected by sweeps
    pub metrics: BTreeMap<String, f64>,
}

impl CommandOutput {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            summary: serde_json::Value::Null,
            ledger: Ledger::default(),
            tables: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    crate_version: &'static str,
    config_hash: String,
    config: &'a RunConfig,
    /// sha256 of each output file except ledger.json and manifest.json
    files: BTreeMap<String, String>,
    ledger: &'a Ledger,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write(dir: &Path, name: &str, bytes: &[u8], files: &mut BTreeMap<String, String>) -> Result<()> {
    fs::write(dir.join(name), bytes)?;
    files.insert(name.into(), sha256_hex(bytes));
    Ok(())
}

/// Writes the run into `dir` and returns the paths written.
pub fn write_run(dir: &Path, cfg: &RunConfig, out: &CommandOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = BTreeMap::new();
    write(dir, "summary.json", &serde_json::to_vec_pretty(&out.summary)?, &mut files)?;
    for (name, t) in &out.tables {
        write(dir, &format!("{name}.csv"), &t.to_csv()?, &mut files)?;
    }
    fs::write(dir.join("ledger.json"), serde_json::to_vec_pretty(&out.ledger)?)?;
    let manifest = Manifest {
        command: &out.command,
        crate_version: env!("CARGO_PKG_VERSION"),
        config_hash: cfg.hash()?,
        config: cfg,
        files: files.clone(),
        ledger: &out.ledger,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&manifest)?)?;
    let mut paths: Vec<PathBuf> = files.keys().map(|k| dir.join(k)).collect();
    paths.push(dir.join("ledger.json"));
    paths.push(dir.join("manifest.json"));
    Ok(paths)
}
