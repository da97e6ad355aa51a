//! Result files: CSV/JSON writers and the run manifest.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{OutputFormat, SimulateSettings};
use super::CliError;
use crate::simulate::SweepSummary;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), format_float)
}

/// Everything needed to regenerate a run's data files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub command_line: Vec<String>,
    /// Seconds since the Unix epoch; the only field that differs between reruns.
    pub timestamp: u64,
    pub master_seed: u64,
    pub config: T,
    pub outputs: Vec<String>,
}

impl<T> RunManifest<T> {
    pub fn new(command: &str, master_seed: u64, command_line: Vec<String>, config: T, outputs: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            command_line,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            master_seed,
            config,
            outputs,
        }
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_manifest<T: Serialize>(path: &Path, manifest: &RunManifest<T>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::io(path, e))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

/// Writes a header row and records; fields are quoted only when needed.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::io(path, e);
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

const TRIAL_COLUMNS: [&str; 6] = ["N", "trial", "sinr", "beta_n", "eta_n", "spec_eff"];
const SUMMARY_COLUMNS: [&str; 10] = [
    "N", "mean_se", "std_se", "mean_eta", "std_eta", "q05", "q50", "q95", "asym_se", "rel_err",
];

/// Writes the trials and summary files; returns their names.
pub fn write_simulation(
    dir: &Path,
    settings: &SimulateSettings,
    summary: &SweepSummary,
) -> Result<Vec<String>, CliError> {
    ensure_dir(dir)?;
    match settings.format {
        OutputFormat::Csv => {
            let trials: Vec<Vec<String>> = summary
                .trials
                .iter()
                .map(|t| {
                    vec![
                        t.antennas.to_string(),
                        t.trial_index.to_string(),
                        format_float(t.sinr),
                        format_float(t.beta_n),
                        format_float(t.eta_n),
                        format_float(t.spec_eff),
                    ]
                })
                .collect();
            let rows: Vec<Vec<String>> = summary
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.antennas.to_string(),
                        format_float(r.mean_spec_eff),
                        format_float(r.std_spec_eff),
                        format_float(r.mean_eta),
                        format_float(r.std_eta),
                        format_float(r.q05),
                        format_float(r.q50),
                        format_float(r.q95),
                        format_opt(r.asymptotic_spec_eff),
                        format_opt(r.rel_error),
                    ]
                })
                .collect();
            write_csv(&dir.join("trials.csv"), &TRIAL_COLUMNS, &trials)?;
            write_csv(&dir.join("summary.csv"), &SUMMARY_COLUMNS, &rows)?;
            Ok(vec!["trials.csv".into(), "summary.csv".into()])
        }
        OutputFormat::Json => {
            let trials: Vec<_> = summary
                .trials
                .iter()
                .map(|t| {
                    json!({
                        "N": t.antennas,
                        "trial": t.trial_index,
                        "sinr": t.sinr,
                        "beta_n": t.beta_n,
                        "eta_n": t.eta_n,
                        "spec_eff": t.spec_eff,
                    })
                })
                .collect();
            let rows: Vec<_> = summary
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "N": r.antennas,
                        "mean_se": r.mean_spec_eff,
                        "std_se": r.std_spec_eff,
                        "mean_eta": r.mean_eta,
                        "std_eta": r.std_eta,
                        "q05": r.q05,
                        "q50": r.q50,
                        "q95": r.q95,
                        "asym_se": r.asymptotic_spec_eff,
                        "rel_err": r.rel_error,
                    })
                })
                .collect();
            write_json(&dir.join("trials.json"), &json!({ "trials": trials }))?;
            write_json(&dir.join("summary.json"), &json!({ "summary": rows }))?;
            Ok(vec!["trials.json".into(), "summary.json".into()])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_opt(None), "NaN");
    }
}
