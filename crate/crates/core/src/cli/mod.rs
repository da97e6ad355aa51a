//! Command-line front end: `solve`, `approx`, `plan`, `simulate`, `figures`.
//!
//! Exit codes are a stable contract: 0 success, 2 invalid parameters,
//! 3 solver non-convergence, 4 I/O failure. Every failure also writes a
//! one-line JSON object to standard error.

mod config;
mod figures;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use config::{parse_key_values, OutputFormat, SimulateOverrides, SimulateSettings};
pub use figures::FigureSettings;
pub use output::{format_float, RunManifest};

use crate::asymptotic::{self, LinkParameters, DEFAULT_TOL};
use crate::error::Error;
use crate::model::ScaledPowerDistribution;
use crate::simulate::ChannelModel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable that replaces any configured master seed.
pub const SEED_ENV: &str = "NONHOM_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            kind: "InvalidParameter",
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Self {
            code: EXIT_IO,
            kind: "Io",
            message: format!("{}: {err}", path.display()),
        }
    }

    fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind, "message": self.message, "exit_code": self.code } })
            .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InvalidParameter(_) => (EXIT_INVALID, "InvalidParameter"),
            Error::PoleError { .. } => (EXIT_INVALID, "PoleError"),
            Error::DomainError(_) => (EXIT_INVALID, "DomainError"),
            Error::ZeroRadiusNode { .. } => (EXIT_INVALID, "ZeroRadiusNode"),
            Error::DimensionMismatch { .. } => (EXIT_INVALID, "DimensionMismatch"),
            Error::NonConvergence { .. } => (EXIT_NONCONVERGENCE, "NonConvergence"),
            Error::BracketFailure { .. } => (EXIT_NONCONVERGENCE, "BracketFailure"),
            Error::NoFiniteRoot { .. } => (EXIT_NONCONVERGENCE, "NoFiniteRoot"),
            Error::QuadratureFailure { .. } => (EXIT_NONCONVERGENCE, "QuadratureFailure"),
            Error::FactorizationFailure { .. } => (EXIT_NONCONVERGENCE, "FactorizationFailure"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "nonhom",
    version,
    about = "MMSE receiver SINR in power-law networks: asymptotics and Monte Carlo",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the normalized fixed-point equation for β and η.
    Solve(SolveArgs),
    /// Large-network SINR and spectral efficiency for N antennas.
    Approx(ApproxArgs),
    /// Antennas needed for a target spectral efficiency.
    Plan(PlanArgs),
    /// Monte Carlo sweep over antenna counts; writes trials, summary, manifest.
    Simulate(SimulateArgs),
    /// Emit plot-ready data for one of the reference figures (2–6).
    Figures(FigureArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    /// Interferers per antenna.
    #[arg(long)]
    pub c: f64,
    /// Normalized noise power.
    #[arg(long, default_value_t = 0.0)]
    pub sigma2: f64,
    /// Force the quadrature solver.
    #[arg(long)]
    pub general: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub rho: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rt: f64,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub link: LinkArgs,
    /// Antenna count; need not be an integer.
    #[arg(long)]
    pub antennas: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub link: LinkArgs,
    /// Target spectral efficiency in bits/s/Hz.
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// key=value config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Reuse the configuration echoed in a previous run's manifest.
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: SimulateOverrides,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure id, 2 through 6.
    #[arg(long)]
    pub figure: Option<u32>,
    /// Reuse the configuration echoed in a previous figure manifest.
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub epsilons: Option<Vec<f64>>,
    /// Target spectral efficiencies (figure 6).
    #[arg(long, value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub rt: Option<f64>,
    #[arg(long = "n-nodes")]
    pub n_nodes: Option<usize>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub antennas: Option<Vec<usize>>,
    /// Trials per point for mean curves (figures 3 and 5).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Scatter points per antenna count (figures 2 and 4).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub channel: Option<ChannelModel>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Entry point used by the binary: reads `NONHOM_SEED` and the real streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, env_seed.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command with explicit environment and streams; returns the exit code.
pub fn run_with<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    let usage = CliError {
                        code: EXIT_INVALID,
                        kind: "Usage",
                        message: rendered.lines().next().unwrap_or("").to_string(),
                    };
                    let _ = writeln!(err, "{}", usage.to_json());
                    EXIT_INVALID
                }
            };
        }
    };
    let command_line: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let ctx = Context {
        env_seed,
        command_line,
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Approx(a) => cmd_approx(&a, out),
        Command::Plan(a) => cmd_plan(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, &ctx, out),
        Command::Figures(a) => figures::cmd_figures(&a, &ctx, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.code
        }
    }
}

pub(crate) struct Context<'a> {
    pub env_seed: Option<&'a str>,
    pub command_line: Vec<String>,
}

fn emit(out: &mut dyn Write, json: bool, fields: &[(&str, serde_json::Value)]) -> CliResult<()> {
    let res = if json {
        let map: serde_json::Map<String, serde_json::Value> =
            fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        writeln!(out, "{}", serde_json::Value::Object(map))
    } else {
        fields.iter().try_for_each(|(k, v)| match v {
            serde_json::Value::String(s) => writeln!(out, "{k} = {s}"),
            other => writeln!(out, "{k} = {other}"),
        })
    };
    res.map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    let general = || -> CliResult<_> {
        let dist = ScaledPowerDistribution::power_law(a.alpha, a.epsilon)?;
        let problem = asymptotic::FixedPointProblem::new(a.c, a.sigma2, dist)?;
        Ok(asymptotic::solve_general(&problem, a.tol)?)
    };
    let (sol, method) = if a.general {
        (general()?, "quadrature")
    } else {
        match asymptotic::solve_power_law(a.alpha, a.epsilon, a.c, a.sigma2, a.tol) {
            Ok(sol) => (sol, "closed-form"),
            // Below α = 2+ε only the quadrature route applies.
            Err(Error::DomainError(_)) => (general()?, "quadrature"),
            Err(e) => return Err(e.into()),
        }
    };
    emit(
        out,
        a.json,
        &[
            ("beta", json!(sol.beta)),
            ("eta", sol.eta.map_or(serde_json::Value::Null, |v| json!(v))),
            ("residual", json!(sol.residual)),
            ("iterations", json!(sol.iterations)),
            ("method", json!(method)),
        ],
    )
}

fn link(a: &LinkArgs) -> CliResult<LinkParameters> {
    Ok(LinkParameters::new(a.rt, a.alpha)?)
}

fn cmd_approx(a: &ApproxArgs, out: &mut dyn Write) -> CliResult<()> {
    let l = link(&a.link)?;
    let sinr = asymptotic::sinr_approx(&l, a.link.epsilon, a.link.rho, a.antennas)?;
    let gamma = asymptotic::spec_eff_approx(&l, a.link.epsilon, a.link.rho, a.antennas)?;
    emit(
        out,
        a.json,
        &[
            ("sinr", json!(sinr)),
            ("sinr_db", json!(10.0 * sinr.log10())),
            ("spec_eff", json!(gamma)),
        ],
    )
}

fn cmd_plan(a: &PlanArgs, out: &mut dyn Write) -> CliResult<()> {
    let l = link(&a.link)?;
    let n = asymptotic::antennas_required(a.gamma, &l, a.link.epsilon, a.link.rho)?;
    emit(
        out,
        a.json,
        &[("antennas", json!(n)), ("antennas_ceil", json!(n.ceil() as u64))],
    )
}

/// Loads the `config` object of a manifest written by `command`.
fn manifest_config<T: serde::de::DeserializeOwned>(path: &Path, command: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let manifest: RunManifest<T> = serde_json::from_str(&text)
        .map_err(|e| CliError::invalid(format!("{}: not a manifest: {e}", path.display())))?;
    if manifest.command != command {
        return Err(CliError::invalid(format!(
            "{}: manifest is for '{}', not '{command}'",
            path.display(),
            manifest.command
        )));
    }
    Ok(manifest.config)
}

fn cmd_simulate(a: &SimulateArgs, ctx: &Context<'_>, out: &mut dyn Write) -> CliResult<()> {
    let base = a
        .from_manifest
        .as_deref()
        .map(|p| manifest_config::<SimulateSettings>(p, "simulate"))
        .transpose()?;
    let file = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            SimulateOverrides::from_pairs(&parse_key_values(&text)?)?
        }
        None => SimulateOverrides::default(),
    };
    let merged = file.merge(a.overrides.clone());
    let mut settings = merged.apply(base)?;
    if let Some(seed) = config::seed_override(ctx.env_seed)? {
        settings.seed = seed;
    }
    let out_dir = merged.out.clone().unwrap_or_else(|| PathBuf::from("."));

    let cfg = settings.sim_config()?;
    output::ensure_dir(&out_dir)?;
    let summary = crate::simulate::run_sweep(&cfg, &settings.antennas)?;
    let files = output::write_simulation(&out_dir, &settings, &summary)?;
    let manifest = RunManifest::new("simulate", settings.seed, ctx.command_line.clone(), settings, files);
    let path = out_dir.join("manifest.json");
    output::write_manifest(&path, &manifest)?;
    writeln!(out, "wrote {}", path.display()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nonhom").chain(args.iter().copied());
        let code = run_with(argv, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn error_codes() {
        let (code, _, err) = run_capture(&["solve", "--alpha", "2.5", "--epsilon", "0.5", "--c", "10"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("PoleError"), "{err}");

        let (code, _, err) = run_capture(&["solve", "--alpha", "4", "--epsilon", "0", "--c", "1"]);
        assert_eq!(code, EXIT_NONCONVERGENCE);
        assert!(err.contains("NoFiniteRoot"), "{err}");

        let (code, _, _) = run_capture(&["approx", "--alpha", "3", "--epsilon", "1", "--antennas", "8"]);
        assert_eq!(code, EXIT_INVALID);

        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("\"Usage\""));
    }

    #[test]
    fn solve_prints_fields() {
        let (code, out, _) = run_capture(&["solve", "--alpha", "4", "--epsilon", "0", "--c", "1e-12", "--sigma2", "1"]);
        assert_eq!(code, 0);
        let beta: f64 = out
            .lines()
            .find_map(|l| l.strip_prefix("beta = "))
            .unwrap()
            .parse()
            .unwrap();
        assert!((beta - 1.0).abs() < 1e-9);
        assert!(out.contains("residual = "));
        assert!(out.contains("eta = "));
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("simulate"));
    }
}
