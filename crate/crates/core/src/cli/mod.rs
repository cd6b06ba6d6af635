//! The `qsl` command line: config parsing, subcommands and data emission.

mod config;
mod output;
mod validate;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use config::{
    GridConfig, ModelKind, ModelSpec, OptimizerSpec, OrthoSpec, OutputFormat, OutputSpec, Resolved, RunConfig,
};
pub use output::{curves_csv, curves_json, landscape_csv, landscape_json, num, optima_json, CURVE_HEADER};
pub use validate::{render as render_checks, run_suite, Check};

use crate::bounds::{ratio_curve, SignMode};
use crate::error::QslError;
use crate::optimizer::{grid_search, refine_local, Candidate};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "QSL_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(#[from] QslError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("validation failed: {0}")]
    Checks(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qsl", version, about = "Quantum speed-limit curves, Bloch-angle optimization and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// T/T_MT and T/T_SQSL against final time.
    Curve(RunArgs),
    /// (θ, φ) landscape of the time-averaged T/T_SQSL and its minima.
    Optimize(RunArgs),
    /// Built-in invariant suite, plus the configured run if one is given.
    Validate(RunArgs),
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model as `kind:key=value,...`, e.g. `qubit-product:m=2,alpha=0.5`.
    #[arg(long)]
    pub model: Option<String>,
    /// `projector`, `bloch:theta=..,phi=..` or `custom:XZ=0.5,ZZ=1`; repeatable.
    #[arg(long)]
    pub ortho: Vec<String>,
    /// `paper-fixed`, `adaptive`, or `inverted` (negative control).
    #[arg(long)]
    pub sign_mode: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
}

pub fn parse_sign(s: &str) -> Result<SignMode, CliError> {
    match s {
        "paper-fixed" => Ok(SignMode::PaperFixed),
        "adaptive" => Ok(SignMode::Adaptive),
        "inverted" => Ok(SignMode::Inverted),
        _ => Err(CliError::Config(format!("unknown sign mode {s:?}"))),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_string(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

impl RunArgs {
    /// Config file contents with command-line flags applied on top.
    pub fn into_config(self, default_sign: SignMode) -> Result<Option<RunConfig>, CliError> {
        let mut cfg = match &self.config {
            Some(p) => Some(RunConfig::parse(&read(p)?).map_err(CliError::config)?),
            None => None,
        };
        if let Some(m) = &self.model {
            let spec = ModelSpec::parse_flag(m).map_err(CliError::config)?;
            match &mut cfg {
                Some(c) => c.model = spec,
                None => {
                    cfg = Some(RunConfig {
                        sign_mode: default_sign,
                        model: spec,
                        grid: None,
                        ortho: Vec::new(),
                        output: None,
                        optimizer: None,
                    })
                }
            }
        }
        let Some(mut cfg) = cfg else {
            if self.ortho.is_empty() && self.t_max.is_none() && self.points.is_none() && self.out.is_none() {
                return Ok(None);
            }
            return Err(CliError::Config("flags need a model: pass --model or --config".into()));
        };
        if !self.ortho.is_empty() {
            cfg.ortho =
                self.ortho.iter().map(|o| OrthoSpec::parse_flag(o)).collect::<Result<_, _>>().map_err(CliError::config)?;
        }
        if let Some(s) = &self.sign_mode {
            cfg.sign_mode = parse_sign(s)?;
        }
        if self.t_max.is_some() || self.points.is_some() {
            let consts = cfg.model.consts().map_err(CliError::config)?;
            let mut g = cfg.grid.unwrap_or(GridConfig { t_min: 0.0, t_max: consts.period(), points: crate::bounds::DEFAULT_POINTS });
            if let Some(t) = self.t_max {
                g.t_max = t;
            }
            if let Some(p) = self.points {
                g.points = p;
            }
            cfg.grid = Some(g);
        }
        if self.out.is_some() || self.format.is_some() {
            let mut o = cfg.output.clone().unwrap_or_default();
            if let Some(p) = &self.out {
                o.path = Some(p.display().to_string());
            }
            if let Some(f) = &self.format {
                o.format = f.parse().map_err(CliError::config)?;
            }
            cfg.output = Some(o);
        }
        Ok(Some(cfg))
    }
}

/// Curve data rendered in the configured format.
pub fn render_curve(cfg: &RunConfig) -> Result<(String, Resolved), CliError> {
    let r = cfg.resolve().map_err(CliError::config)?;
    let curves = ratio_curve(&r.model, &r.orthos, &r.grid, r.sign)?;
    let text = match r.output.format {
        OutputFormat::Csv => curves_csv(&curves, &r.labels),
        OutputFormat::Json => curves_json(r.model.name(), &curves, &r.labels),
    };
    Ok((text, r))
}

pub fn cmd_curve(cfg: &RunConfig) -> Result<(), CliError> {
    let (text, r) = render_curve(cfg)?;
    write(r.output.path.as_deref(), &text)
}

/// Landscape text and optima for the configured model.
pub fn render_optimize(cfg: &RunConfig) -> Result<(String, Vec<Candidate>, Resolved), CliError> {
    let r = cfg.resolve().map_err(CliError::config)?;
    let (lattice, spec, refine) = cfg.objective(&r.model).map_err(CliError::config)?;
    let rep = grid_search(&r.model, &lattice, &spec)?;
    let mut optima = rep.candidates.clone();
    if refine {
        optima = optima
            .iter()
            .map(|c| {
                let f = refine_local(&r.model, (c.theta, c.phi), &spec)?;
                Ok(Candidate { theta: f.theta, phi: f.phi, objective: f.objective })
            })
            .collect::<Result<Vec<_>, QslError>>()?;
        optima.sort_by(|a, b| {
            a.objective.total_cmp(&b.objective).then(a.theta.total_cmp(&b.theta)).then(a.phi.total_cmp(&b.phi))
        });
    }
    let text = match r.output.format {
        OutputFormat::Csv => landscape_csv(&rep.landscape),
        OutputFormat::Json => landscape_json(&rep.landscape),
    };
    Ok((text, optima, r))
}

pub fn cmd_optimize(cfg: &RunConfig) -> Result<(), CliError> {
    let (text, optima, r) = render_optimize(cfg)?;
    let json = optima_json(&optima);
    match (&r.output.path, &r.output.optima_path) {
        (Some(p), Some(o)) => {
            write(Some(p), &text)?;
            write(Some(o), &json)
        }
        (Some(p), None) => {
            write(Some(p), &text)?;
            write(None, &json)
        }
        (None, Some(o)) => {
            write(None, &text)?;
            write(Some(o), &json)
        }
        (None, None) => write(None, &format!("{text}{json}")),
    }
}

/// Prints the check table; fails naming every failing check.
pub fn cmd_validate(cfg: Option<&RunConfig>, sign: SignMode) -> Result<Vec<Check>, CliError> {
    let resolved = cfg.map(|c| c.resolve().map_err(CliError::config)).transpose()?;
    let checks = run_suite(sign, resolved.as_ref());
    write(None, &render_checks(&checks))?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(checks)
    } else {
        Err(CliError::Checks(failed.join(", ")))
    }
}

fn init_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    init_workers()?;
    match cli.command {
        Command::Curve(a) => {
            let cfg = a.into_config(SignMode::PaperFixed)?.ok_or_else(|| CliError::Config("curve needs --config or --model".into()))?;
            cmd_curve(&cfg)
        }
        Command::Optimize(a) => {
            let cfg =
                a.into_config(SignMode::PaperFixed)?.ok_or_else(|| CliError::Config("optimize needs --config or --model".into()))?;
            cmd_optimize(&cfg)
        }
        Command::Validate(a) => {
            let override_sign = a.sign_mode.as_deref().map(parse_sign).transpose()?;
            let cfg = a.into_config(SignMode::Adaptive)?;
            let sign = override_sign.unwrap_or(SignMode::Adaptive);
            cmd_validate(cfg.as_ref(), sign).map(|_| ())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qsl: {e}");
            e.exit_code()
        }
    }
}
