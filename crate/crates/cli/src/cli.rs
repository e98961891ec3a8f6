//! Argument parsing and the exit-code contract: 0 when every enabled
//! assertion passed, 2 when some failed, 1 on configuration or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::commands;
use crate::config::{
    self, BoundCompareConfig, ContourVerifyConfig, Format, GroundConfig, InstanceConfig, NoiseConfig, SingularRectConfig,
    SparsifyPowerConfig, Validate,
};
use crate::error::{CliError, Result};
use crate::output::{emit, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ASSERTIONS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eigenbound", version, about = "Seeded eigenspace perturbation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measured perturbation against Davis-Kahan and moderate-gap bounds.
    BoundCompare(Flags),
    /// Contour-integral chain and segment bounds.
    ContourVerify(Flags),
    /// Power iteration on a sparsified matrix with its certificate.
    SparsifyPower(Flags),
    /// Singular-subspace bounds for rectangular and signed-spectrum instances.
    SingularRect(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config (version 1); defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed_base: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Data file; the summary and wall-time metadata go to sidecar files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Quadrature nodes per contour segment (contour-verify only).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// MatrixMarket ground matrix.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// MatrixMarket noise matrix.
    #[arg(long)]
    pub noise: Option<PathBuf>,
}

fn base<T: DeserializeOwned + Default>(flags: &Flags) -> Result<T> {
    match &flags.config {
        Some(p) => config::load(p),
        None => Ok(T::default()),
    }
}

fn apply_run<T: Validate>(cfg: &mut T, flags: &Flags) {
    let run = cfg.run_mut();
    if let Some(s) = flags.seed_base {
        run.seed_base = s;
        run.seeds = None;
    }
    if let Some(t) = flags.trials {
        run.trials = t;
        run.seeds = None;
    }
    if let Some(o) = &flags.out {
        run.out = Some(o.clone());
    }
    if let Some(f) = flags.format {
        run.format = f;
    }
}

fn reject_nodes(flags: &Flags, command: &str) -> Result<()> {
    if flags.nodes.is_some() {
        return Err(CliError::Config(format!("--nodes does not apply to {command}")));
    }
    Ok(())
}

pub fn bound_compare_config(flags: &Flags) -> Result<BoundCompareConfig> {
    reject_nodes(flags, "bound-compare")?;
    let mut cfg: BoundCompareConfig = base(flags)?;
    apply_run(&mut cfg, flags);
    if let Some(m) = &flags.matrix {
        cfg.ground = GroundConfig::File { path: m.clone() };
    }
    if let Some(e) = &flags.noise {
        cfg.noise = NoiseConfig::CustomFile { path: e.clone() };
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn contour_verify_config(flags: &Flags) -> Result<ContourVerifyConfig> {
    let mut cfg: ContourVerifyConfig = base(flags)?;
    apply_run(&mut cfg, flags);
    if let Some(n) = flags.nodes {
        cfg.nodes = n;
    }
    if let Some(m) = &flags.matrix {
        cfg.ground = GroundConfig::File { path: m.clone() };
    }
    if let Some(e) = &flags.noise {
        cfg.noise = NoiseConfig::CustomFile { path: e.clone() };
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn sparsify_power_config(flags: &Flags) -> Result<SparsifyPowerConfig> {
    reject_nodes(flags, "sparsify-power")?;
    let mut cfg: SparsifyPowerConfig = base(flags)?;
    apply_run(&mut cfg, flags);
    if let Some(m) = &flags.matrix {
        cfg.ground = GroundConfig::File { path: m.clone() };
    }
    if let Some(e) = &flags.noise {
        cfg.noise_file = Some(e.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn singular_rect_config(flags: &Flags) -> Result<SingularRectConfig> {
    reject_nodes(flags, "singular-rect")?;
    let mut cfg: SingularRectConfig = base(flags)?;
    apply_run(&mut cfg, flags);
    if let Some(m) = &flags.matrix {
        cfg.instance = InstanceConfig::File { path: m.clone() };
    }
    if let Some(e) = &flags.noise {
        cfg.noise = NoiseConfig::CustomFile { path: e.clone() };
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Resolves flags and config, runs the command, and returns its report with
/// the output settings.
pub fn execute(command: &Command) -> Result<(Report, Format, Option<PathBuf>)> {
    Ok(match command {
        Command::BoundCompare(f) => {
            let c = bound_compare_config(f)?;
            (commands::bound_compare::run(&c)?, c.run.format, c.run.out)
        }
        Command::ContourVerify(f) => {
            let c = contour_verify_config(f)?;
            (commands::contour_verify::run(&c)?, c.run.format, c.run.out)
        }
        Command::SparsifyPower(f) => {
            let c = sparsify_power_config(f)?;
            (commands::sparsify_power::run(&c)?, c.run.format, c.run.out)
        }
        Command::SingularRect(f) => {
            let c = singular_rect_config(f)?;
            (commands::singular_rect::run(&c)?, c.run.format, c.run.out)
        }
    })
}

/// Runs a parsed command line against the given streams; returns the exit code.
pub fn run_with(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = execute(&cli.command).and_then(|(report, format, out)| {
        emit(&report, format, out.as_deref(), stdout, stderr)?;
        Ok(report.failures)
    });
    match result {
        Ok(0) => EXIT_OK,
        Ok(n) => {
            let _ = writeln!(stderr, "{n} assertion failure(s)");
            EXIT_ASSERTIONS
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    run_with(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
