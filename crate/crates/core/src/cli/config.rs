//! Run settings, flat `key=value` config files, and their merge order:
//! defaults (or a manifest echo) < config file < flags < `NONHOM_SEED`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::simulate::{ChannelModel, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::invalid(format!("unknown format '{other}'"))),
        }
    }
}

/// Everything needed to regenerate the data files of a `simulate` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateSettings {
    pub alpha: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub rt: f64,
    pub n_nodes: usize,
    pub noise: f64,
    pub antennas: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub channel: ChannelModel,
    pub format: OutputFormat,
}

impl SimulateSettings {
    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let first = *self
            .antennas
            .first()
            .ok_or_else(|| CliError::invalid("antenna list is empty"))?;
        let mut cfg = SimConfig::reference(self.alpha, self.epsilon, first, self.seed)?;
        cfg.intensity = crate::model::PowerLawIntensity::new(self.rho, self.epsilon)?;
        cfg.link = crate::asymptotic::LinkParameters::new(self.rt, self.alpha)?;
        cfg.n_nodes = self.n_nodes;
        cfg.noise_power = self.noise;
        cfg.trials = self.trials;
        cfg.channel = self.channel;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Optional overrides shared by flags and config files.
#[derive(Debug, Clone, Default, Args)]
pub struct SimulateOverrides {
    /// Path-loss exponent α (> 2).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Radial intensity exponent ε (> −2).
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Node density coefficient ρ.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Target link length r_T.
    #[arg(long)]
    pub rt: Option<f64>,
    /// Number of interferers n.
    #[arg(long = "n-nodes")]
    pub n_nodes: Option<usize>,
    /// Absolute noise power per antenna.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Comma-separated ascending antenna counts.
    #[arg(long, value_delimiter = ',')]
    pub antennas: Option<Vec<usize>>,
    /// Trials per antenna count.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed (NONHOM_SEED overrides).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Channel entry law: gaussian or qpsk.
    #[arg(long)]
    pub channel: Option<ChannelModel>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for trials and summary.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl SimulateOverrides {
    /// Later overrides win.
    pub fn merge(self, later: SimulateOverrides) -> SimulateOverrides {
        SimulateOverrides {
            alpha: later.alpha.or(self.alpha),
            epsilon: later.epsilon.or(self.epsilon),
            rho: later.rho.or(self.rho),
            rt: later.rt.or(self.rt),
            n_nodes: later.n_nodes.or(self.n_nodes),
            noise: later.noise.or(self.noise),
            antennas: later.antennas.or(self.antennas),
            trials: later.trials.or(self.trials),
            seed: later.seed.or(self.seed),
            channel: later.channel.or(self.channel),
            out: later.out.or(self.out),
            format: later.format.or(self.format),
        }
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut o = SimulateOverrides::default();
        for (key, value) in pairs {
            match key.as_str() {
                "alpha" => o.alpha = Some(parse_value(key, value)?),
                "epsilon" => o.epsilon = Some(parse_value(key, value)?),
                "rho" => o.rho = Some(parse_value(key, value)?),
                "rt" => o.rt = Some(parse_value(key, value)?),
                "n_nodes" => o.n_nodes = Some(parse_value(key, value)?),
                "noise" => o.noise = Some(parse_value(key, value)?),
                "antennas" => o.antennas = Some(parse_list(key, value)?),
                "trials" => o.trials = Some(parse_value(key, value)?),
                "seed" => o.seed = Some(parse_value(key, value)?),
                "channel" => o.channel = Some(value.parse()?),
                "out" => o.out = Some(PathBuf::from(value)),
                "format" => o.format = Some(value.parse()?),
                other => return Err(CliError::invalid(format!("unknown config key '{other}'"))),
            }
        }
        Ok(o)
    }

    pub fn apply(&self, base: Option<SimulateSettings>) -> Result<SimulateSettings, CliError> {
        let required = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::invalid(format!("missing required parameter '{name}'")))
        };
        let s = match base {
            Some(b) => SimulateSettings {
                alpha: self.alpha.unwrap_or(b.alpha),
                epsilon: self.epsilon.unwrap_or(b.epsilon),
                rho: self.rho.unwrap_or(b.rho),
                rt: self.rt.unwrap_or(b.rt),
                n_nodes: self.n_nodes.unwrap_or(b.n_nodes),
                noise: self.noise.unwrap_or(b.noise),
                antennas: self.antennas.clone().unwrap_or(b.antennas),
                trials: self.trials.unwrap_or(b.trials),
                seed: self.seed.unwrap_or(b.seed),
                channel: self.channel.unwrap_or(b.channel),
                format: self.format.unwrap_or(b.format),
            },
            None => SimulateSettings {
                alpha: required(self.alpha, "alpha")?,
                epsilon: required(self.epsilon, "epsilon")?,
                rho: self.rho.unwrap_or(SimConfig::DEFAULT_RHO),
                rt: self.rt.unwrap_or(SimConfig::DEFAULT_R_T),
                n_nodes: self.n_nodes.unwrap_or(SimConfig::DEFAULT_NODES),
                noise: self.noise.unwrap_or(SimConfig::DEFAULT_NOISE),
                antennas: self.antennas.clone().unwrap_or_else(|| vec![2, 4, 8, 16, 32]),
                trials: self.trials.unwrap_or(SimConfig::DEFAULT_TRIALS),
                seed: self.seed.unwrap_or(0),
                channel: self.channel.unwrap_or_default(),
                format: self.format.unwrap_or_default(),
            },
        };
        Ok(s)
    }
}

/// Parses flat `key=value` text: one pair per line, `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut pairs = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::invalid(format!("config line {}: expected key=value", lineno + 1))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::invalid(format!("config line {}: empty key", lineno + 1)));
        }
        if pairs.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(CliError::invalid(format!("config key '{key}' repeated")));
        }
    }
    Ok(pairs)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(format!("bad value '{value}' for '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value.split(',').map(|v| parse_value(key, v)).collect()
}

/// `NONHOM_SEED`, when set, replaces any configured seed.
pub fn seed_override(env_seed: Option<&str>) -> Result<Option<u64>, CliError> {
    env_seed
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::invalid(format!("NONHOM_SEED='{s}' is not a u64")))
        })
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_parsing() {
        let text = "# header\nalpha = 3\n\nepsilon=-0.5 # inline\nantennas=8,16\n";
        let pairs = parse_key_values(text).unwrap();
        assert_eq!(pairs["alpha"], "3");
        assert_eq!(pairs["epsilon"], "-0.5");
        let o = SimulateOverrides::from_pairs(&pairs).unwrap();
        assert_eq!(o.antennas, Some(vec![8, 16]));
        assert_eq!(o.epsilon, Some(-0.5));
    }

    #[test]
    fn malformed_config() {
        assert!(parse_key_values("alpha 3").is_err());
        assert!(parse_key_values("=3").is_err());
        assert!(parse_key_values("a=1\na=2").is_err());
        let mut pairs = BTreeMap::new();
        pairs.insert("beta".to_string(), "1".to_string());
        assert!(SimulateOverrides::from_pairs(&pairs).is_err());
        pairs.clear();
        pairs.insert("trials".to_string(), "many".to_string());
        assert!(SimulateOverrides::from_pairs(&pairs).is_err());
    }

    #[test]
    fn later_overrides_win() {
        let file = SimulateOverrides {
            alpha: Some(3.0),
            trials: Some(10),
            ..Default::default()
        };
        let flags = SimulateOverrides {
            trials: Some(20),
            ..Default::default()
        };
        let m = file.merge(flags);
        assert_eq!(m.alpha, Some(3.0));
        assert_eq!(m.trials, Some(20));
    }

    #[test]
    fn missing_required() {
        assert!(SimulateOverrides::default().apply(None).is_err());
    }

    #[test]
    fn env_seed() {
        assert_eq!(seed_override(Some("42")).unwrap(), Some(42));
        assert_eq!(seed_override(None).unwrap(), None);
        assert!(seed_override(Some("x")).is_err());
    }
}
