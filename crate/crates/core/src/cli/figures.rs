//! Plot-ready data behind the reference figures.
//!
//! * 2 — scatter of η_N (first `samples` trials per N) plus the fixed-point η.
//! * 3 — mean spectral efficiency vs N, one curve per α.
//! * 4 — scatter of spectral efficiency per N for each α, with the approximation.
//! * 5 — mean spectral efficiency vs N, one curve per ε.
//! * 6 — antennas required vs ε, one column per target γ.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::seed_override;
use super::output::{ensure_dir, format_float, write_csv, write_manifest, RunManifest};
use super::{manifest_config, CliError, CliResult, Context, FigureArgs};
use crate::asymptotic::{self, LinkParameters};
use crate::model::PowerLawIntensity;
use crate::simulate::{predicted_eta, predicted_spec_eff, run_sweep, ChannelModel, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSettings {
    pub figure: u32,
    pub alphas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub gammas: Vec<f64>,
    pub rho: f64,
    pub rt: f64,
    pub n_nodes: usize,
    pub noise: f64,
    pub antennas: Vec<usize>,
    pub trials: usize,
    pub samples: usize,
    pub seed: u64,
    pub channel: ChannelModel,
}

impl FigureSettings {
    /// Reference parameters for `figure`.
    pub fn defaults(figure: u32) -> CliResult<Self> {
        let (alphas, epsilons): (Vec<f64>, Vec<f64>) = match figure {
            2 => (vec![3.0], vec![-0.5]),
            3 => (vec![2.5, 3.0, 3.5, 4.0, 4.5], vec![-0.5]),
            4 => (vec![2.5, 4.0], vec![-0.5]),
            5 => (vec![4.0], vec![-1.0, -0.75, -0.5, -0.25, 0.0]),
            6 => (vec![3.0], (0..=20).map(|i| -1.0 + 0.05 * f64::from(i)).collect()),
            other => return Err(CliError::invalid(format!("unknown figure id {other} (expected 2-6)"))),
        };
        Ok(Self {
            figure,
            alphas,
            epsilons,
            gammas: vec![1.0, 2.0, 3.0],
            rho: SimConfig::DEFAULT_RHO,
            rt: SimConfig::DEFAULT_R_T,
            n_nodes: SimConfig::DEFAULT_NODES,
            noise: SimConfig::DEFAULT_NOISE,
            antennas: vec![2, 4, 8, 16, 32],
            trials: SimConfig::DEFAULT_TRIALS,
            samples: 50,
            seed: 0,
            channel: ChannelModel::Gaussian,
        })
    }

    fn apply(mut self, a: &FigureArgs) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = a.$f.clone() { self.$f = v; } )* };
        }
        take!(alphas, epsilons, gammas, rho, rt, n_nodes, noise, antennas, trials, samples, seed, channel);
        self
    }

    fn sim_config(&self, alpha: f64, epsilon: f64, trials: usize) -> CliResult<SimConfig> {
        let first = *self
            .antennas
            .first()
            .ok_or_else(|| CliError::invalid("antenna list is empty"))?;
        let cfg = SimConfig {
            intensity: PowerLawIntensity::new(self.rho, epsilon)?,
            link: LinkParameters::new(self.rt, alpha)?,
            n_nodes: self.n_nodes,
            antennas: first,
            noise_power: self.noise,
            channel: self.channel,
            master_seed: self.seed,
            trials,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn curves(&self) -> Vec<(f64, f64)> {
        self.alphas
            .iter()
            .flat_map(|&a| self.epsilons.iter().map(move |&e| (a, e)))
            .collect()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), format_float)
}

type Table = (Vec<&'static str>, Vec<Vec<String>>);

/// Scatter samples per N plus one prediction row per N.
fn scatter(s: &FigureSettings, eta: bool) -> CliResult<Table> {
    let mut rows = Vec::new();
    for (alpha, eps) in s.curves() {
        let cfg = s.sim_config(alpha, eps, s.samples)?;
        let sweep = run_sweep(&cfg, &s.antennas)?;
        let head = |series: &str, n: usize| {
            vec![series.to_string(), format_float(alpha), format_float(eps), n.to_string()]
        };
        for t in &sweep.trials {
            let mut row = head("sample", t.antennas);
            row.push(t.trial_index.to_string());
            row.push(format_float(if eta { t.eta_n } else { t.spec_eff }));
            rows.push(row);
        }
        for &n in &s.antennas {
            let c = SimConfig { antennas: n, ..cfg };
            let mut row = head("asymptote", n);
            row.push(String::new());
            row.push(opt(if eta { predicted_eta(&c) } else { predicted_spec_eff(&c) }));
            rows.push(row);
        }
    }
    let value = if eta { "eta_n" } else { "spec_eff" };
    Ok((vec!["series", "alpha", "epsilon", "N", "trial", value], rows))
}

fn mean_curves(s: &FigureSettings) -> CliResult<Table> {
    let mut rows = Vec::new();
    for (alpha, eps) in s.curves() {
        let cfg = s.sim_config(alpha, eps, s.trials)?;
        for r in run_sweep(&cfg, &s.antennas)?.rows {
            rows.push(vec![
                format_float(alpha),
                format_float(eps),
                r.antennas.to_string(),
                r.trials.to_string(),
                format_float(r.mean_spec_eff),
                format_float(r.std_spec_eff),
                opt(r.asymptotic_spec_eff),
                opt(r.rel_error),
            ]);
        }
    }
    Ok((
        vec!["alpha", "epsilon", "N", "trials", "mean_se", "std_se", "asym_se", "rel_err"],
        rows,
    ))
}

fn planning_curves(s: &FigureSettings) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let alpha = match s.alphas.as_slice() {
        [a] => *a,
        _ => return Err(CliError::invalid("figure 6 takes exactly one alpha")),
    };
    let link = LinkParameters::new(s.rt, alpha)?;
    let mut header = vec!["epsilon".to_string()];
    header.extend(s.gammas.iter().map(|g| format!("N_gamma_{g}")));
    let mut rows = Vec::new();
    for &eps in &s.epsilons {
        let mut row = vec![format_float(eps)];
        for &g in &s.gammas {
            row.push(format_float(asymptotic::antennas_required(g, &link, eps, s.rho)?));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub(super) fn cmd_figures(a: &FigureArgs, ctx: &Context<'_>, out: &mut dyn Write) -> CliResult<()> {
    let base = match (&a.from_manifest, a.figure) {
        (Some(p), fig) => {
            let b: FigureSettings = manifest_config(p, "figures")?;
            if fig.is_some_and(|f| f != b.figure) {
                return Err(CliError::invalid("--figure disagrees with the manifest"));
            }
            b
        }
        (None, Some(fig)) => FigureSettings::defaults(fig)?,
        (None, None) => return Err(CliError::invalid("--figure is required")),
    };
    let mut s = base.apply(a);
    if let Some(seed) = seed_override(ctx.env_seed)? {
        s.seed = seed;
    }

    ensure_dir(&a.out)?;
    let (header, rows): (Vec<String>, _) = match s.figure {
        2 | 4 => {
            let (h, r) = scatter(&s, s.figure == 2)?;
            (h.into_iter().map(String::from).collect(), r)
        }
        3 | 5 => {
            let (h, r) = mean_curves(&s)?;
            (h.into_iter().map(String::from).collect(), r)
        }
        6 => planning_curves(&s)?,
        other => return Err(CliError::invalid(format!("unknown figure id {other} (expected 2-6)"))),
    };

    let name = format!("fig{}.csv", s.figure);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&a.out.join(&name), &header, &rows)?;
    let manifest_path = a.out.join(format!("fig{}.manifest.json", s.figure));
    let manifest = RunManifest::new("figures", s.seed, ctx.command_line.clone(), s, vec![name]);
    write_manifest(&manifest_path, &manifest)?;
    writeln!(out, "wrote {}", manifest_path.display()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}
