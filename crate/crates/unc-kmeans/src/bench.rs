//! Experiment harness: repeated seeded runs per initializer over one
//! dataset, aggregate statistics, JSON/CSV reports, and the `bench` CLI.
//!
//! Run r of every initializer draws from the stream `(base_seed, r)`, so a
//! report is fully determined by its config: rerunning an identical config
//! reproduces every seed index, SSEDM, and iteration count, and adding runs
//! never perturbs earlier ones. Wall-clock fields are the only exception.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baseline::{kmeanspp_init, maxmin_init, random_init};
use crate::dataset::{load_csv, CsvOptions, Dataset, Scaling};
use crate::error::{Error, Result};
use crate::lloyd::run_lloyd;
use crate::rng::RngStream;
use crate::seeds::{InitMethod, Seeds};
use crate::unc::select_seeds_unc;

/// Everything a benchmark run depends on; echoed verbatim into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset_path: PathBuf,
    pub csv: CsvOptions,
    pub scaling: Scaling,
    pub k: usize,
    pub initializers: Vec<InitMethod>,
    pub runs: usize,
    pub base_seed: u64,
    pub max_iter: usize,
}

impl ExperimentConfig {
    /// Config with the defaults used throughout: every initializer, 50 runs,
    /// seed 42, 300-round iteration budget, comma-delimited unscaled input.
    pub fn new(dataset_path: impl Into<PathBuf>, k: usize) -> Self {
        Self {
            dataset_path: dataset_path.into(),
            csv: CsvOptions::default(),
            scaling: Scaling::None,
            k,
            initializers: InitMethod::ALL.to_vec(),
            runs: 50,
            base_seed: 42,
            max_iter: 300,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if self.runs < 1 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max-iter must be at least 1".into()));
        }
        if self.initializers.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one initializer is required".into(),
            ));
        }
        for (i, method) in self.initializers.iter().enumerate() {
            if self.initializers[..i].contains(method) {
                return Err(Error::InvalidConfig(format!(
                    "initializer {method} listed twice"
                )));
            }
        }
        Ok(())
    }
}

/// Provenance of the loaded dataset as it entered the runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    /// SHA-256 of the raw file bytes, hex-encoded.
    pub checksum: String,
    pub n: usize,
    pub m: usize,
}

/// One seeded initializer+Lloyd execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub ssedm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seconds: f64,
    pub seed_indices: Vec<usize>,
}

/// Aggregates over one initializer's runs; std is the population standard
/// deviation so single-run reports stay finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub ssedm_mean: f64,
    pub ssedm_std: f64,
    pub ssedm_min: f64,
    pub ssedm_max: f64,
    pub iter_mean: f64,
    pub seconds_mean: f64,
}

impl MethodSummary {
    pub fn from_runs(runs: &[RunRecord]) -> Self {
        let n = runs.len() as f64;
        let mean = runs.iter().map(|r| r.ssedm).sum::<f64>() / n;
        let var = runs
            .iter()
            .map(|r| {
                let d = r.ssedm - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        Self {
            ssedm_mean: mean,
            ssedm_std: var.sqrt(),
            ssedm_min: runs.iter().map(|r| r.ssedm).fold(f64::INFINITY, f64::min),
            ssedm_max: runs
                .iter()
                .map(|r| r.ssedm)
                .fold(f64::NEG_INFINITY, f64::max),
            iter_mean: runs.iter().map(|r| r.iterations as f64).sum::<f64>() / n,
            seconds_mean: runs.iter().map(|r| r.seconds).sum::<f64>() / n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub name: String,
    pub runs: Vec<RunRecord>,
    pub summary: MethodSummary,
}

/// Full benchmark outcome; serializes to the stable `schema: 1` JSON layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub version: String,
    pub dataset: DatasetInfo,
    pub config: ExperimentConfig,
    pub methods: Vec<MethodReport>,
}

impl ExperimentReport {
    /// Zeroes every wall-clock field; reports stripped this way are
    /// byte-identical across reruns of the same config.
    pub fn strip_timings(&mut self) {
        for method in &mut self.methods {
            for run in &mut method.runs {
                run.seconds = 0.0;
            }
            method.summary.seconds_mean = 0.0;
        }
    }
}

/// Dispatches to the initializer behind a method tag.
pub fn make_seeds(
    dataset: &Dataset,
    k: usize,
    method: InitMethod,
    rng: &mut RngStream,
) -> Result<Seeds> {
    match method {
        InitMethod::Random => random_init(dataset, k, rng),
        InitMethod::KMeansPlusPlus => kmeanspp_init(dataset, k, rng),
        InitMethod::Maxmin => maxmin_init(dataset, k, rng),
        InitMethod::Unc => select_seeds_unc(dataset, k),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Loads the configured dataset, runs every selected initializer `runs`
/// times, and assembles the report. The UNC initializer is deterministic:
/// its per-run results differ at most in wall time.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let bytes = std::fs::read(&config.dataset_path).map_err(|source| Error::Io {
        path: config.dataset_path.clone(),
        source,
    })?;
    let checksum = sha256_hex(&bytes);
    let dataset = load_csv(&config.dataset_path, &config.csv)?;
    let dataset = config.scaling.apply(&dataset);
    let distinct = dataset.distinct_count();
    if config.k > distinct {
        return Err(Error::InsufficientDistinctPoints {
            k: config.k,
            distinct,
        });
    }
    let info = DatasetInfo {
        name: dataset.name().to_string(),
        checksum,
        n: dataset.len(),
        m: dataset.dim(),
    };
    let mut methods = Vec::with_capacity(config.initializers.len());
    for &method in &config.initializers {
        let mut runs = Vec::with_capacity(config.runs);
        for run_index in 0..config.runs {
            let mut rng = RngStream::new(config.base_seed, run_index as u64);
            let start = Instant::now();
            let seeds = make_seeds(&dataset, config.k, method, &mut rng)?;
            let result = run_lloyd(&dataset, &seeds, config.max_iter)?;
            let seconds = start.elapsed().as_secs_f64();
            runs.push(RunRecord {
                run_index,
                ssedm: result.ssedm,
                iterations: result.iterations,
                converged: result.converged,
                seconds,
                seed_indices: seeds.source_indices().to_vec(),
            });
        }
        let summary = MethodSummary::from_runs(&runs);
        methods.push(MethodReport {
            name: method.name().to_string(),
            runs,
            summary,
        });
    }
    Ok(ExperimentReport {
        schema: 1,
        version: env!("CARGO_PKG_VERSION").to_string(),
        dataset: info,
        config: config.clone(),
        methods,
    })
}

/// On-disk report representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidConfig(format!(
                "unknown format {other:?} (expected json|csv)"
            ))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &ExperimentReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidConfig(format!("report serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// CSV dump: one detail row per (initializer, run), then a blank line and a
/// per-method summary block shaped like the usual results table.
pub fn to_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str("initializer,run_index,ssedm,iterations,converged,seconds,seed_indices\n");
    for method in &report.methods {
        for run in &method.runs {
            let indices = run
                .seed_indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                method.name,
                run.run_index,
                run.ssedm,
                run.iterations,
                run.converged,
                run.seconds,
                indices
            ));
        }
    }
    out.push('\n');
    out.push_str("initializer,ssedm_mean,ssedm_std,ssedm_min,ssedm_max,iter_mean,seconds_mean\n");
    for method in &report.methods {
        let s = &method.summary;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            method.name,
            s.ssedm_mean,
            s.ssedm_std,
            s.ssedm_min,
            s.ssedm_max,
            s.iter_mean,
            s.seconds_mean
        ));
    }
    out
}

/// Writes the report in the requested format.
pub fn write_report(
    report: &ExperimentReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let content = match format {
        ReportFormat::Json => to_json(report)?,
        ReportFormat::Csv => to_csv(report),
    };
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Human-readable per-method summary table.
pub fn summary_table(report: &ExperimentReport) -> String {
    let mut out = format!(
        "dataset {} (n={}, m={}, sha256 {}…), k={}, runs={}, seed={}\n",
        report.dataset.name,
        report.dataset.n,
        report.dataset.m,
        &report.dataset.checksum[..12.min(report.dataset.checksum.len())],
        report.config.k,
        report.config.runs,
        report.config.base_seed
    );
    out.push_str(&format!(
        "{:<10} {:>14} {:>12} {:>12} {:>12} {:>8} {:>10}\n",
        "init", "ssedm_mean", "ssedm_std", "ssedm_min", "ssedm_max", "iters", "seconds"
    ));
    for method in &report.methods {
        let s = &method.summary;
        out.push_str(&format!(
            "{:<10} {:>14.6} {:>12.6} {:>12.6} {:>12.6} {:>8.2} {:>10.6}\n",
            method.name, s.ssedm_mean, s.ssedm_std, s.ssedm_min, s.ssedm_max, s.iter_mean, s.seconds_mean
        ));
    }
    out
}

#[derive(Parser, Debug)]
#[command(
    name = "bench",
    version,
    about = "Benchmark k-means initializers (random, kmeanspp, maxmin, unc) on a delimited numeric dataset"
)]
struct Cli {
    /// Dataset file to load
    #[arg(long, value_name = "PATH")]
    data: PathBuf,

    /// Treat the first row as a header and skip it
    #[arg(long)]
    header: bool,

    /// Field separator character
    #[arg(long, value_name = "CHAR", default_value_t = ',')]
    delimiter: char,

    /// Column index to drop before parsing, e.g. a class label (repeatable)
    #[arg(long = "drop-col", value_name = "IDX")]
    drop_col: Vec<usize>,

    /// Feature scaling applied after loading
    #[arg(long, value_name = "none|minmax|zscore", default_value = "none")]
    scale: Scaling,

    /// Number of clusters
    #[arg(long, value_name = "INT")]
    k: usize,

    /// Initializers to benchmark
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        default_value = "random,kmeanspp,maxmin,unc"
    )]
    init: Vec<InitMethod>,

    /// Seeded repetitions per initializer
    #[arg(long, value_name = "INT", default_value_t = 50)]
    runs: usize,

    /// Base seed; run r draws from stream (seed, r)
    #[arg(long, value_name = "UINT64", default_value_t = 42)]
    seed: u64,

    /// Lloyd round budget per run
    #[arg(long = "max-iter", value_name = "INT", default_value_t = 300)]
    max_iter: usize,

    /// Where to write the report; summary goes to stdout either way
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report file format
    #[arg(long, value_name = "json|csv", default_value = "json")]
    format: ReportFormat,
}

impl Cli {
    fn into_config(self) -> (ExperimentConfig, Option<PathBuf>, ReportFormat) {
        let config = ExperimentConfig {
            dataset_path: self.data,
            csv: CsvOptions {
                has_header: self.header,
                delimiter: self.delimiter,
                drop_columns: self.drop_col,
            },
            scaling: self.scale,
            k: self.k,
            initializers: self.init,
            runs: self.runs,
            base_seed: self.seed,
            max_iter: self.max_iter,
        };
        (config, self.out, self.format)
    }
}

/// CLI entry point. Exit codes: 0 success, 2 usage or config validation
/// errors, 1 runtime failures.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let (config, out, format) = cli.into_config();
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return 2;
    }
    match run_experiment(&config) {
        Ok(report) => {
            if let Some(path) = out {
                if let Err(e) = write_report(&report, format, &path) {
                    eprintln!("error: {e}");
                    return 1;
                }
            }
            print!("{}", summary_table(&report));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
