//! Command-line front end: `spinkink <command> [--config FILE] [--out DIR] ...`.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 regime error, 4 numerical failure, 5 i/o error.

pub mod commands;
pub mod output;

use crate::config::RunConfig;
use crate::error::{Error, ErrorClass, Result};
use crate::phi4::{DensityConvention, WidthMode};
use clap::{Parser, Subcommand, ValueEnum};
use output::{sha256_hex, write_run, Table};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

pub use commands::run_command;

#[derive(Debug, Parser)]
#[command(name = "spinkink", version, about = "Spin chain kinks and one-loop energy corrections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; missing keys take their defaults
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// output directory (SPINKINK_OUT and the config's out_dir are fallbacks)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// worker threads for sweeps
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub width_mode: Option<WidthArg>,
    #[arg(long, global = true, value_enum)]
    pub density: Option<DensityArg>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// classical kink: profiles, residuals, energies, relaxation
    Kink,
    /// one-loop corrections for d = 1, 2, 3
    Corrections,
    /// the m² = 0 border: sn wave, heat trace, energy correction
    M0,
    /// lattice dynamics of the embedded kink
    ChainSim,
    /// cartesian sweep over the config's [[sweep.axes]]
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kink => "kink",
            Command::Corrections => "corrections",
            Command::M0 => "m0",
            Command::ChainSim => "chain-sim",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WidthArg {
    Paper,
    Eom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DensityArg {
    Eq8,
    Eq10,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Input => 2,
        ErrorClass::Regime => 3,
        ErrorClass::Numerical => 4,
        ErrorClass::Io => 5,
    }
}

/// Flags over environment over config file.
pub fn resolve(cli: &Cli) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(w) = cli.width_mode {
        cfg.width_mode = match w {
            WidthArg::Paper => WidthMode::PaperLiteral,
            WidthArg::Eom => WidthMode::EomConsistent,
        };
    }
    if let Some(d) = cli.density {
        cfg.density = match d {
            DensityArg::Eq8 => DensityConvention::Eq8,
            DensityArg::Eq10 => DensityConvention::Eq10,
        };
    }
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("SPINKINK_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
    Ok((cfg, out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub values: Vec<f64>,
    /// "ok" or the error's exit-code class
    pub status: String,
    pub metrics: std::collections::BTreeMap<String, f64>,
}

/// Points of the cartesian product, last axis fastest.
pub fn sweep_points(cfg: &RunConfig) -> Vec<Vec<f64>> {
    let mut pts = vec![Vec::new()];
    for axis in &cfg.sweep.axes {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Runs every point on `workers` threads; the result is in point order whatever the scheduling.
pub fn run_sweep(cfg: &RunConfig, out: Option<&Path>, workers: usize) -> Result<Vec<SweepPoint>> {
    if cfg.sweep.axes.is_empty() {
        return Err(Error::Config("sweep needs at least one [[sweep.axes]] entry".into()));
    }
    if cfg.sweep.command == "sweep" {
        return Err(Error::Config("a sweep cannot run sweeps".into()));
    }
    let pts = sweep_points(cfg);
    let configs = pts
        .iter()
        .map(|vals| {
            cfg.sweep.axes.iter().zip(vals).try_fold(cfg.clone(), |c, (a, v)| c.with_value(&a.key, *v))
        })
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<Result<SweepPoint>> = pool.install(|| {
        configs
            .par_iter()
            .zip(pts.par_iter())
            .enumerate()
            .map(|(index, (c, vals))| {
                let (status, metrics) = match run_command(&cfg.sweep.command, c) {
                    Ok(o) => {
                        if let Some(dir) = out {
                            write_run(&dir.join(format!("point_{index:04}")), c, &o)?;
                        }
                        ("ok".to_string(), o.metrics)
                    }
                    Err(e @ Error::Config(_)) => return Err(e),
                    Err(e) => (format!("error {}: {e}", exit_code(&e)), Default::default()),
                };
                Ok(SweepPoint { index, values: vals.clone(), status, metrics })
            })
            .collect()
    });
    results.into_iter().collect()
}

/// Aggregate CSV: index, axis values, status, then the union of metric names in sorted order.
pub fn sweep_csv(cfg: &RunConfig, points: &[SweepPoint]) -> Result<Vec<u8>> {
    let names: std::collections::BTreeSet<&String> = points.iter().flat_map(|p| p.metrics.keys()).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string()];
    header.extend(cfg.sweep.axes.iter().map(|a| a.key.clone()));
    header.push("status".into());
    header.extend(names.iter().map(|s| s.to_string()));
    w.write_record(&header)?;
    for p in points {
        let mut row = vec![p.index.to_string()];
        row.extend(p.values.iter().map(|v| format!("{v:?}")));
        row.push(p.status.clone());
        row.extend(names.iter().map(|n| p.metrics.get(*n).map_or(String::new(), |v| format!("{v:?}"))));
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn execute(cli: &Cli) -> Result<PathBuf> {
    let (cfg, out) = resolve(cli)?;
    match cli.command {
        Command::Sweep => {
            let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let points = run_sweep(&cfg, Some(&out), workers)?;
            std::fs::create_dir_all(&out)?;
            let bytes = sweep_csv(&cfg, &points)?;
            std::fs::write(out.join("sweep.csv"), &bytes)?;
            let mut meta = Table::new(&["points", "failed"]);
            let failed = points.iter().filter(|p| p.status != "ok").count();
            meta.push(vec![points.len() as f64, failed as f64]);
            std::fs::write(out.join("sweep_meta.csv"), meta.to_csv()?)?;
            std::fs::write(
                out.join("sweep_manifest.json"),
                serde_json::to_vec_pretty(&serde_json::json!({
                    "command": cfg.sweep.command,
                    "config_hash": cfg.hash()?,
                    "config": cfg,
                    "sweep_csv_sha256": sha256_hex(&bytes),
                }))?,
            )?;
        }
        c => {
            let o = run_command(c.name(), &cfg)?;
            write_run(&out, &cfg, &o)?;
        }
    }
    Ok(out)
}

/// Parses `args`, runs, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(dir) => {
            println!("{} -> {}", cli.command.name(), dir.display());
            0
        }
        Err(e) => {
            eprintln!("spinkink {}: {e}", cli.command.name());
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Axis;

    fn sweep_cfg() -> RunConfig {
        let mut c = RunConfig::default();
        c.sweep.axes = vec![
            Axis { key: "spin.gmub_b".into(), values: vec![0.5, 1.0, 3.0] },
            Axis { key: "quant.d".into(), values: vec![1.0, 3.0] },
        ];
        c
    }

    #[test]
    fn cartesian_order() {
        let p = sweep_points(&sweep_cfg());
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0.5, 1.0]);
        assert_eq!(p[1], vec![0.5, 3.0]);
        assert_eq!(p[5], vec![3.0, 3.0]);
    }

    #[test]
    fn sweep_is_independent_of_worker_count() {
        let c = sweep_cfg();
        let a = run_sweep(&c, None, 1).unwrap();
        let b = run_sweep(&c, None, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(sweep_csv(&c, &a).unwrap(), sweep_csv(&c, &b).unwrap());
        // h = 3 > -2D leaves the kink regime
        assert!(a[4].status.starts_with("error 3"), "{}", a[4].status);
        assert_eq!(a[0].status, "ok");
    }

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Regime("x".into())), 3);
        assert_eq!(exit_code(&Error::Convergence("x".into())), 4);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 5);
    }
}
