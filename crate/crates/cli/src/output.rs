//! Run manifest and CSV tables.

use std::path::Path;

use anyhow::{Context, Result};
use phfluid::simulator::{Failure, SimConfig, SimOutput};
use serde::{Deserialize, Serialize};

pub const MANIFEST: &str = "manifest.json";
pub const ENERGY: &str = "energy.csv";
pub const REPORT: &str = "report.json";
pub const SERIES: &str = "series.csv";
pub const VERIFY: &str = "verify.json";

pub fn version() -> String {
    format!("phfluid {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Running,
    Completed,
    Aborted,
}

/// Paths are relative to the run directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub energy: String,
    pub snapshots: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: SimConfig,
    pub version: String,
    pub seed: u64,
    pub started: String,
    pub finished: Option<String>,
    pub status: RunStatus,
    pub last_good_step: Option<usize>,
    pub failure: Option<Failure>,
    pub outputs: Outputs,
}

impl RunManifest {
    pub fn start(config: &SimConfig) -> Self {
        RunManifest {
            seed: config.seed,
            config: config.clone(),
            version: version(),
            started: now(),
            finished: None,
            status: RunStatus::Running,
            last_good_step: None,
            failure: None,
            outputs: Outputs {
                energy: ENERGY.into(),
                snapshots: Vec::new(),
            },
        }
    }
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// One `energy.csv` row. Column order is the field order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub step: usize,
    pub t: f64,
    #[serde(rename = "H_k")]
    pub h: f64,
    #[serde(rename = "dH_dt")]
    pub dh_dt: f64,
    #[serde(rename = "P_boundary")]
    pub p_boundary: f64,
    #[serde(rename = "P_distributed")]
    pub p_distributed: f64,
    /// `dH_dt − P_boundary − P_distributed`.
    pub residual: f64,
    pub mass_total: f64,
    pub max_vorticity: f64,
}

pub const ENERGY_COLUMNS: [&str; 9] = [
    "step",
    "t",
    "H_k",
    "dH_dt",
    "P_boundary",
    "P_distributed",
    "residual",
    "mass_total",
    "max_vorticity",
];

pub fn energy_rows(out: &SimOutput) -> Vec<EnergyRow> {
    out.samples
        .iter()
        .zip(&out.reports)
        .map(|(s, r)| EnergyRow {
            step: s.step,
            t: s.time,
            h: r.h,
            dh_dt: r.dh_dt,
            p_boundary: r.p_boundary,
            p_distributed: r.p_distributed,
            residual: r.residual,
            mass_total: s.mass,
            max_vorticity: s.max_vorticity,
        })
        .collect()
}

pub fn write_energy(path: &Path, rows: &[EnergyRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    if rows.is_empty() {
        w.write_record(ENERGY_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_energy(path: &Path) -> Result<Vec<EnergyRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers: Vec<String> = r.headers()?.iter().map(String::from).collect();
    anyhow::ensure!(
        headers == ENERGY_COLUMNS,
        "unexpected energy.csv header {headers:?}"
    );
    r.deserialize()
        .collect::<std::result::Result<Vec<EnergyRow>, _>>()
        .context("parsing energy.csv")
}

/// Long-format row of `series.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub step: usize,
    pub t: f64,
    pub variable: String,
    pub value: f64,
}

pub fn series_rows(rows: &[EnergyRow]) -> Vec<SeriesRow> {
    let mut out = Vec::with_capacity(rows.len() * 7);
    for r in rows {
        for (name, value) in [
            ("H_k", r.h),
            ("dH_dt", r.dh_dt),
            ("P_boundary", r.p_boundary),
            ("P_distributed", r.p_distributed),
            ("residual", r.residual),
            ("mass_total", r.mass_total),
            ("max_vorticity", r.max_vorticity),
        ] {
            out.push(SeriesRow {
                step: r.step,
                t: r.t,
                variable: name.into(),
                value,
            });
        }
    }
    out
}

pub fn write_series(path: &Path, rows: &[SeriesRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
