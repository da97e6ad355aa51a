use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_trial, SimConfig, TrialResult};
use crate::asymptotic::{self, FixedPointProblem, DEFAULT_TOL};
use crate::error::{invalid, Result};
use crate::model::ScaledPowerDistribution;

/// Aggregates for one antenna count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub antennas: usize,
    pub trials: usize,
    pub mean_sinr: f64,
    pub mean_spec_eff: f64,
    pub std_spec_eff: f64,
    pub mean_eta: f64,
    pub std_eta: f64,
    /// Nearest-rank quantiles of the spectral efficiency.
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    /// Large-network spectral efficiency prediction, when one exists.
    pub asymptotic_spec_eff: Option<f64>,
    pub rel_error: Option<f64>,
    /// Fixed-point η at `c = n/N` with zero normalized noise.
    pub asymptotic_eta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    /// Every trial, grouped by antenna count in sweep order, then by trial index.
    pub trials: Vec<TrialResult>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Nearest-rank quantile of sorted data.
fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Spectral efficiency the asymptotic analysis predicts for `config`.
///
/// Uses the closed-form large-network approximation when `α > 2+ε`;
/// otherwise `log₂(1 + r_T^(−α) g(n)^α β)` with β from the general fixed
/// point at zero normalized noise.
pub fn predicted_spec_eff(config: &SimConfig) -> Option<f64> {
    let antennas = config.antennas as f64;
    if let Ok(v) = asymptotic::spec_eff_approx(
        &config.link,
        config.epsilon(),
        config.intensity.rho(),
        antennas,
    ) {
        return Some(v);
    }
    let dist = ScaledPowerDistribution::power_law(config.alpha(), config.epsilon()).ok()?;
    let problem = FixedPointProblem::new(config.ratio(), 0.0, dist).ok()?;
    let sol = asymptotic::solve_general(&problem, DEFAULT_TOL).ok()?;
    let sinr = asymptotic::sinr_from_beta(&sol, &config.link, &config.intensity, config.antennas).ok()?;
    Some(sinr.ln_1p() / std::f64::consts::LN_2)
}

/// Fixed-point η for `config`'s ratio `c = n/N` at zero normalized noise.
pub fn predicted_eta(config: &SimConfig) -> Option<f64> {
    let (alpha, eps, c) = (config.alpha(), config.epsilon(), config.ratio());
    match asymptotic::solve_power_law(alpha, eps, c, 0.0, DEFAULT_TOL) {
        Ok(sol) => sol.eta,
        Err(_) => {
            let dist = ScaledPowerDistribution::power_law(alpha, eps).ok()?;
            let problem = FixedPointProblem::new(c, 0.0, dist).ok()?;
            asymptotic::solve_general(&problem, DEFAULT_TOL).ok()?.eta
        }
    }
}

/// Aggregates the trials of one antenna count. Input order does not matter.
pub fn summarize(config: &SimConfig, results: &[TrialResult]) -> Result<SweepRow> {
    if results.is_empty() {
        return Err(invalid("cannot summarize zero trials"));
    }
    let mut sorted = results.to_vec();
    sorted.sort_by_key(|t| t.trial_index);

    let sinr: Vec<f64> = sorted.iter().map(|t| t.sinr).collect();
    let se: Vec<f64> = sorted.iter().map(|t| t.spec_eff).collect();
    let eta: Vec<f64> = sorted.iter().map(|t| t.eta_n).collect();
    let (mean_sinr, _) = mean_std(&sinr);
    let (mean_spec_eff, std_spec_eff) = mean_std(&se);
    let (mean_eta, std_eta) = mean_std(&eta);

    let mut se_sorted = se;
    se_sorted.sort_by(f64::total_cmp);

    let asymptotic_spec_eff = predicted_spec_eff(config);
    let rel_error = asymptotic_spec_eff.map(|a| (mean_spec_eff - a).abs() / a);
    Ok(SweepRow {
        antennas: config.antennas,
        trials: sorted.len(),
        mean_sinr,
        mean_spec_eff,
        std_spec_eff,
        mean_eta,
        std_eta,
        q05: nearest_rank(&se_sorted, 0.05),
        q50: nearest_rank(&se_sorted, 0.50),
        q95: nearest_rank(&se_sorted, 0.95),
        asymptotic_spec_eff,
        rel_error,
        asymptotic_eta: predicted_eta(config),
    })
}

/// Runs `config.trials` trials for each antenna count. Trials execute in
/// parallel; every trial draws from its own `(N, trial)` stream.
pub fn run_sweep(config: &SimConfig, antenna_list: &[usize]) -> Result<SweepSummary> {
    if antenna_list.is_empty() {
        return Err(invalid("antenna list is empty"));
    }
    if antenna_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("antenna list must be strictly ascending"));
    }
    let mut rows = Vec::with_capacity(antenna_list.len());
    let mut trials = Vec::with_capacity(antenna_list.len() * config.trials);
    for &antennas in antenna_list {
        let cfg = SimConfig { antennas, ..*config };
        cfg.validate()?;
        let results = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(&cfg, t))
            .collect::<Result<Vec<_>>>()?;
        rows.push(summarize(&cfg, &results)?);
        trials.extend(results);
    }
    Ok(SweepSummary { rows, trials })
}
