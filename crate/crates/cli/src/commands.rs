//! The `verify`, `simulate` and `report` commands.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use phfluid::simulator::{run, SimConfig, Simulation, Tolerances};
use phfluid::verify::{verify, VerifyConfig, VerifyReport};
use phfluid::Error;
use serde::{Deserialize, Serialize};

use crate::output::{self, EnergyRow, RunManifest, RunStatus};
use crate::snapshot;

/// Command failures, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input (exit 2).
    #[error("{0:#}")]
    Input(anyhow::Error),
    /// Failure while running or writing results (exit 1).
    #[error("{0:#}")]
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// `Ok(true)` exits 0, `Ok(false)` exits 1.
pub type Outcome = Result<bool, CliError>;

pub fn exit_code(outcome: &Outcome) -> i32 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => e.exit_code(),
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Input(e.into())
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Runtime(e.into())
}

/// Configuration problems are input errors; anything else is a runtime error.
fn classify(e: Error) -> CliError {
    match e {
        Error::Config(_) | Error::InvalidGrid(_) | Error::Density { .. } => input(e),
        _ => runtime(e),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(input)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(input)
}

pub fn cmd_verify(config: &Path, resolutions: Option<Vec<usize>>, out: &Path) -> Outcome {
    let mut config: VerifyConfig = read_json(config)?;
    if let Some(r) = resolutions {
        config.resolutions = r;
    }
    if config.resolutions.is_empty() {
        return Err(input(anyhow!("at least one resolution is required")));
    }
    if let Some(&n) = config.resolutions.iter().find(|&&n| n < phfluid::forms::MIN_RESOLUTION) {
        return Err(input(anyhow!(
            "resolution {n} is below the minimum of {}",
            phfluid::forms::MIN_RESOLUTION
        )));
    }
    create_dir(out)?;
    let report: VerifyReport = verify(&config).map_err(classify)?;
    output::write_json(&out.join(output::VERIFY), &report).map_err(runtime)?;
    for r in &report.identities {
        let finest = r.finest().map_or(0.0, |m| m.value);
        eprintln!(
            "{:26} {:9} {:.3e}  order {}  {}",
            r.identity.name(),
            r.domain.name(),
            finest,
            r.order.map_or("-".into(), |p| format!("{p:.2}")),
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    for f in report.failures() {
        eprintln!("failure: {f}");
    }
    Ok(report.pass)
}

pub fn cmd_simulate(config: &Path, out: &Path) -> Outcome {
    let config: SimConfig = read_json(config)?;
    let mut sim = Simulation::new(config.clone()).map_err(classify)?;
    create_dir(out)?;
    let manifest_path = out.join(output::MANIFEST);
    let mut manifest = RunManifest::start(&config);
    output::write_json(&manifest_path, &manifest).map_err(runtime)?;

    let result = run(&mut sim);
    let rows = output::energy_rows(&result);
    output::write_energy(&out.join(output::ENERGY), &rows).map_err(runtime)?;
    for snap in &result.snapshots {
        let name = snapshot::file_name(snap.step);
        snapshot::write(&out.join(&name), snap.step, snap.time, &snap.state).map_err(runtime)?;
        manifest.outputs.snapshots.push(name);
    }
    manifest.finished = Some(output::now());
    manifest.last_good_step = result.samples.last().map(|s| s.step);
    manifest.status = if result.failure.is_some() {
        RunStatus::Aborted
    } else {
        RunStatus::Completed
    };
    if let Some(f) = &result.failure {
        eprintln!("run aborted at step {} (last good step {}): {}", f.step, f.last_good_step, f.reason);
    }
    manifest.failure = result.failure;
    output::write_json(&manifest_path, &manifest).map_err(runtime)?;
    Ok(manifest.status == RunStatus::Completed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub pass: bool,
    pub reasons: Vec<String>,
    pub status: RunStatus,
    pub rows: usize,
    pub h0: f64,
    pub max_abs_residual: f64,
    pub mean_abs_residual: f64,
    /// `|H(T) − H(0)| / H(0)`.
    pub energy_drift: f64,
    /// `|ΔH − ∫(P_boundary + P_distributed) dt| / H(0)`.
    pub balance_drift: f64,
    /// `|M(T) − M(0)| / M(0)`.
    pub mass_drift: f64,
    pub tolerances: Tolerances,
}

/// Trapezoid rule over the sample times.
fn trapezoid(t: &[f64], f: &[f64]) -> f64 {
    t.windows(2)
        .zip(f.windows(2))
        .map(|(t, f)| 0.5 * (t[1] - t[0]) * (f[0] + f[1]))
        .sum()
}

pub fn summarize(manifest: &RunManifest, rows: &[EnergyRow]) -> Report {
    let tol = manifest.config.tolerances.clone();
    let mut reasons = Vec::new();
    if let Some(f) = &manifest.failure {
        reasons.push(f.reason.clone());
    } else if manifest.status != RunStatus::Completed {
        reasons.push(format!("run status is {:?}", manifest.status).to_lowercase());
    }
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        reasons.push("energy.csv has no rows".into());
        return Report {
            pass: false,
            reasons,
            status: manifest.status,
            rows: 0,
            h0: 0.0,
            max_abs_residual: 0.0,
            mean_abs_residual: 0.0,
            energy_drift: 0.0,
            balance_drift: 0.0,
            mass_drift: 0.0,
            tolerances: tol,
        };
    };
    let h0 = first.h;
    let scale = if h0 > 0.0 { h0 } else { 1.0 };
    let max_abs_residual = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    let mean_abs_residual = rows.iter().map(|r| r.residual.abs()).sum::<f64>() / rows.len() as f64;
    let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let power: Vec<f64> = rows.iter().map(|r| r.p_boundary + r.p_distributed).collect();
    let dh = last.h - h0;
    let energy_drift = dh.abs() / scale;
    let balance_drift = (dh - trapezoid(&t, &power)).abs() / scale;
    let mass_scale = if first.mass_total != 0.0 { first.mass_total.abs() } else { 1.0 };
    let mass_drift = (last.mass_total - first.mass_total).abs() / mass_scale;
    if !(max_abs_residual <= tol.residual * scale) {
        reasons.push(format!(
            "balance residual {:.3e} exceeds {:.1e} x H(0)",
            max_abs_residual, tol.residual
        ));
    }
    if !(balance_drift <= tol.balance_drift) {
        reasons.push(format!("balance drift {balance_drift:.3e} exceeds {:.1e}", tol.balance_drift));
    }
    if !(mass_drift <= tol.mass_drift) {
        reasons.push(format!("mass drift {mass_drift:.3e} exceeds {:.1e}", tol.mass_drift));
    }
    Report {
        pass: reasons.is_empty(),
        reasons,
        status: manifest.status,
        rows: rows.len(),
        h0,
        max_abs_residual,
        mean_abs_residual,
        energy_drift,
        balance_drift,
        mass_drift,
        tolerances: tol,
    }
}

pub fn cmd_report(run_dir: &Path) -> Outcome {
    let manifest_path: PathBuf = run_dir.join(output::MANIFEST);
    let energy_path = run_dir.join(output::ENERGY);
    for p in [&manifest_path, &energy_path] {
        if !p.is_file() {
            return Err(input(anyhow!("missing {}", p.display())));
        }
    }
    let manifest: RunManifest = read_json(&manifest_path)?;
    let rows = output::read_energy(&energy_path).map_err(input)?;
    let report = summarize(&manifest, &rows);
    output::write_json(&run_dir.join(output::REPORT), &report).map_err(runtime)?;
    output::write_series(&run_dir.join(output::SERIES), &output::series_rows(&rows)).map_err(runtime)?;
    for r in &report.reasons {
        eprintln!("fail: {r}");
    }
    Ok(report.pass)
}
