//! Machine-readable report schemas and writers. Field sets and column
//! orders are fixed; see the README for the documented schemas.

use anyhow::{Context, Result};
use serde::Serialize;
use std::fs;
use std::path::Path;
use varsigma::{BenchmarkReport, BoundCheck, Method, MseBoundCheck, SimulationSpec};

/// Top-level metadata echoed into every JSON report.
#[derive(Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
}

impl Metadata {
    pub fn new(command: &str, seed: u64, config: serde_json::Value) -> Self {
        Self {
            tool: "varsigma",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config,
        }
    }
}

#[derive(Serialize)]
pub struct MethodReport {
    pub method: Method,
    pub lambda: Option<f64>,
    pub sigma2: Option<f64>,
    pub nnz: Option<usize>,
    pub converged: Option<bool>,
    pub duality_gap: Option<f64>,
    pub identity_residual: Option<f64>,
    /// Present when the method failed on this input; the run still exits 0.
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct EstimateReport {
    pub metadata: Metadata,
    pub n: usize,
    pub p: usize,
    pub dropped_columns: Vec<String>,
    pub methods: Vec<MethodReport>,
}

#[derive(Serialize)]
pub struct BenchmarkCell {
    pub spec: SimulationSpec,
    pub cell_seed: u64,
    pub stats: Vec<varsigma::MethodStats>,
}

#[derive(Serialize)]
pub struct CellError {
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    pub alpha: f64,
    pub tau: f64,
    pub error: String,
}

#[derive(Serialize)]
pub struct BenchmarkJson {
    pub metadata: Metadata,
    pub cells: Vec<BenchmarkCell>,
    pub errors: Vec<CellError>,
}

#[derive(Serialize)]
pub struct DeterministicBoundReport {
    pub metadata: Metadata,
    pub bound: String,
    pub reps: usize,
    pub passes: usize,
    pub min_slack: f64,
    pub checks: Vec<BoundCheck>,
}

#[derive(Serialize)]
pub struct MseBoundReport {
    pub metadata: Metadata,
    pub check: MseBoundCheck,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("cannot serialize report")?;
    fs::write(path, text + "\n")
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// `report.csv`: one row per method x cell. Wall-clock seconds live only in
/// the JSON report so reruns with the same seed are byte-identical.
pub fn write_benchmark_csv(path: &Path, cells: &[BenchmarkReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record([
        "method", "tuning", "n", "p", "rho", "alpha", "tau", "reps", "reps_used", "failures",
        "mse_mean", "mse_se", "ratio_mean", "ratio_se",
    ])?;
    for cell in cells {
        for s in &cell.stats {
            w.write_record([
                s.method.tag().to_string(),
                s.tuning.clone(),
                cell.spec.n.to_string(),
                cell.spec.p.to_string(),
                cell.spec.rho.to_string(),
                cell.spec.alpha.to_string(),
                cell.spec.tau.to_string(),
                cell.reps.to_string(),
                s.reps_used.to_string(),
                s.failures.to_string(),
                s.mse_mean.to_string(),
                s.mse_se.map(|v| v.to_string()).unwrap_or_default(),
                s.ratio_mean.to_string(),
                s.ratio_se.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `raw.csv`: one row per method x replication; an empty `sigma_ratio`
/// marks a method-level failure on that replication.
pub fn write_benchmark_raw_csv(path: &Path, cells: &[BenchmarkReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record(["method", "n", "p", "rho", "alpha", "tau", "rep", "sigma_ratio"])?;
    for cell in cells {
        for (m, ratios) in cell.raw.iter().enumerate() {
            let method = cell.stats[m].method.tag();
            for (rep, ratio) in ratios.iter().enumerate() {
                w.write_record([
                    method.to_string(),
                    cell.spec.n.to_string(),
                    cell.spec.p.to_string(),
                    cell.spec.rho.to_string(),
                    cell.spec.alpha.to_string(),
                    cell.spec.tau.to_string(),
                    rep.to_string(),
                    ratio.map(|r| r.to_string()).unwrap_or_default(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
