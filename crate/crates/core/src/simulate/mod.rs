//! Monte Carlo simulation of a linear-MMSE receiver at the center of a
//! power-law network.
//!
//! A trial samples `n` interferers in the disk, draws an IID unit-variance
//! channel from each interferer and from the target transmitter (an extra
//! node at distance `r_T`), and evaluates the exact MMSE output SINR.

mod linalg;
mod sweep;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use linalg::{
    covariance_from_powers, interference_covariance, interference_factor, mmse_sinr,
    mmse_sinr_factored, ChannelMatrix, Cholesky, HermitianMatrix, SquareRootCovariance,
};
pub use sweep::{predicted_eta, predicted_spec_eff, run_sweep, summarize, SweepRow, SweepSummary};

use crate::asymptotic::LinkParameters;
use crate::error::{invalid, Result};
use crate::model::{sample_nodes, NetworkGeometry, PowerLawIntensity};
use crate::rng::{stream, Purpose, StreamKey};

/// Distribution of each channel coefficient: zero mean, `E|h|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    /// Circularly symmetric complex Gaussian.
    #[default]
    Gaussian,
    /// `(±1 ± i)/√2` with equal probability.
    Qpsk,
}

impl ChannelModel {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self {
            Self::Gaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
            }
            Self::Qpsk => {
                let bits: u8 = rng.random();
                let re = if bits & 1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                let im = if bits & 2 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                Complex64::new(re, im)
            }
        }
    }

    pub fn draw_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Complex64> {
        (0..len).map(|_| self.draw(rng)).collect()
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::Qpsk => "qpsk",
        })
    }
}

impl FromStr for ChannelModel {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "circular-gaussian" => Ok(Self::Gaussian),
            "qpsk" => Ok(Self::Qpsk),
            other => Err(invalid(format!("unknown channel model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub intensity: PowerLawIntensity,
    pub link: LinkParameters,
    pub n_nodes: usize,
    pub antennas: usize,
    /// Absolute (not normalized) noise variance per antenna.
    pub noise_power: f64,
    pub channel: ChannelModel,
    pub master_seed: u64,
    pub trials: usize,
}

impl SimConfig {
    pub const DEFAULT_RHO: f64 = 0.01;
    pub const DEFAULT_R_T: f64 = 10.0;
    pub const DEFAULT_NODES: usize = 10_000;
    pub const DEFAULT_NOISE: f64 = 1e-14;
    pub const DEFAULT_TRIALS: usize = 1000;

    /// ρ = 0.01, r_T = 10, 10⁴ nodes, noise 10⁻¹⁴, Gaussian channels, 1000 trials.
    pub fn reference(alpha: f64, epsilon: f64, antennas: usize, master_seed: u64) -> Result<Self> {
        let cfg = Self {
            intensity: PowerLawIntensity::new(Self::DEFAULT_RHO, epsilon)?,
            link: LinkParameters::new(Self::DEFAULT_R_T, alpha)?,
            n_nodes: Self::DEFAULT_NODES,
            antennas,
            noise_power: Self::DEFAULT_NOISE,
            channel: ChannelModel::Gaussian,
            master_seed,
            trials: Self::DEFAULT_TRIALS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(invalid("n_nodes must be at least 1"));
        }
        if self.antennas == 0 || self.antennas > StreamKey::MAX_ANTENNAS as usize {
            return Err(invalid(format!("invalid antenna count {}", self.antennas)));
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(invalid(format!("noise power must be positive, got {}", self.noise_power)));
        }
        if self.trials == 0 || self.trials > u32::MAX as usize {
            return Err(invalid(format!("invalid trial count {}", self.trials)));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.link.alpha()
    }

    pub fn epsilon(&self) -> f64 {
        self.intensity.epsilon()
    }

    /// Interferers per antenna, `c = n / N`.
    pub fn ratio(&self) -> f64 {
        self.n_nodes as f64 / self.antennas as f64
    }

    pub fn geometry(&self) -> Result<NetworkGeometry> {
        NetworkGeometry::from_count(self.intensity, self.n_nodes)
    }

    /// Multiplier taking SINR to `η_N = ((2+ε)N/(2πρ))^(−α/(2+ε)) r_T^α SINR`.
    pub fn eta_scale(&self) -> f64 {
        let order = self.intensity.order();
        let base = order * self.antennas as f64 / (2.0 * PI * self.intensity.rho());
        base.powf(-self.alpha() / order) * self.link.r_t().powf(self.alpha())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub antennas: usize,
    pub trial_index: usize,
    pub sinr: f64,
    /// `r_T^α g(n)^(−α) SINR`
    pub beta_n: f64,
    /// `((2+ε)N/(2πρ))^(−α/(2+ε)) r_T^α SINR`
    pub eta_n: f64,
    /// `log₂(1 + SINR)`
    pub spec_eff: f64,
}

/// One independent realization, fully determined by `(config, trial_index)`.
pub fn run_trial(config: &SimConfig, trial_index: usize) -> Result<TrialResult> {
    config.validate()?;
    let geometry = config.geometry()?;
    let n = config.antennas;
    let key = |purpose| StreamKey::new(purpose, n, trial_index);

    let nodes = sample_nodes(&geometry, &mut stream(config.master_seed, key(Purpose::Nodes)));
    let target = config
        .channel
        .draw_vec(n, &mut stream(config.master_seed, key(Purpose::TargetChannel)));
    let interference = config.channel.draw_vec(
        n * nodes.len(),
        &mut stream(config.master_seed, key(Purpose::InterferenceChannels)),
    );
    let channels = ChannelMatrix::from_columns(n, interference)?;

    let factor = interference_factor(&nodes, &channels, config.alpha(), config.noise_power)?;
    let sinr = mmse_sinr_factored(&target, config.link.target_power(), &factor)?;

    let alpha = config.alpha();
    let normalizer = (config.link.r_t() / geometry.radius()).powf(alpha);
    Ok(TrialResult {
        antennas: n,
        trial_index,
        sinr,
        beta_n: normalizer * sinr,
        eta_n: config.eta_scale() * sinr,
        spec_eff: sinr.ln_1p() / std::f64::consts::LN_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn channel_entries_have_unit_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for model in [ChannelModel::Gaussian, ChannelModel::Qpsk] {
            let v = model.draw_vec(200_000, &mut rng);
            let mean: Complex64 = v.iter().sum::<Complex64>() / v.len() as f64;
            let power = v.iter().map(|h| h.norm_sqr()).sum::<f64>() / v.len() as f64;
            assert!(mean.norm() < 0.01, "{model}: mean {mean}");
            assert!((power - 1.0).abs() < 0.01, "{model}: power {power}");
        }
        let q = ChannelModel::Qpsk.draw(&mut rng);
        assert!((q.re.abs() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((q.im.abs() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn channel_model_parsing() {
        assert_eq!("qpsk".parse::<ChannelModel>().unwrap(), ChannelModel::Qpsk);
        assert_eq!("Gaussian".parse::<ChannelModel>().unwrap(), ChannelModel::Gaussian);
        assert!("rician".parse::<ChannelModel>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SimConfig::reference(3.0, -0.5, 8, 1).unwrap();
        cfg.noise_power = 0.0;
        assert!(cfg.validate().is_err());
        cfg.noise_power = 1e-14;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        assert!(SimConfig::reference(3.0, -0.5, 0, 1).is_err());
    }

    #[test]
    fn trial_is_deterministic() {
        let mut cfg = SimConfig::reference(3.0, -0.5, 4, 99).unwrap();
        cfg.n_nodes = 300;
        let a = run_trial(&cfg, 5).unwrap();
        let b = run_trial(&cfg, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, run_trial(&cfg, 6).unwrap());
    }
}
