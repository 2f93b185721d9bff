//! `greybound` command-line front-end.
//!
//! ```text
//! greybound <potential|bounds|verify|tortoise> [--preset figN]
//!     [--g X --m X --q X --l N] [--omega start:stop:count] [--r-grid min:max:count]
//!     [--out PATH] [--config PATH] [--rel-tol X]
//! ```
//!
//! Every command writes CSV (to `--out` or stdout) headed by one `#` comment
//! line holding the effective configuration. Settings layer as defaults <
//! preset < config file < flags. There is no environment-variable
//! configuration.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical non-convergence,
//! 3 bound violation.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
pub use commands::{cmd_bounds, cmd_potential, cmd_tortoise, cmd_verify, VerifyHooks, VerifySummary};
pub use config::{Family, OmegaGrid, Overrides, Preset, RGrid, RunConfig};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_BOUND_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "greybound",
    version,
    about = "Greybody-factor bounds for Schwarzschild and Reissner-Nordström black holes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Potential barrier sampled uniformly in r*, with the uncharged comparison column.
    Potential(CommonArgs),
    /// Closed-form transmission and reflection bounds over an ω grid.
    Bounds(CommonArgs),
    /// Numeric scattering sweep checked against the bounds.
    Verify(VerifyArgs),
    /// Tortoise coordinate with a finite-difference consistency residual.
    Tortoise(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Figure preset (G = 1, GM = 2, l = 1; Q = 0 for fig1, Q = 1 otherwise).
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Newton constant.
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Mass.
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    /// Charge.
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Angular momentum number.
    #[arg(long)]
    l: Option<u32>,
    /// Frequency grid, `start:stop:count` or a comma-separated list.
    #[arg(long)]
    omega: Option<String>,
    /// Radial grid, `min:max:count`.
    #[arg(long = "r-grid")]
    r_grid: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    /// Horizon-side cut, relative to r_+.
    #[arg(long = "eps-horizon")]
    eps_horizon: Option<f64>,
    /// Far cut radius.
    #[arg(long = "r-far")]
    r_far: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Replace the potential by V ≡ 0 (harness self-test).
    #[arg(long, hide = true)]
    free_potential: bool,
    /// Shift every transmission bound by this amount (harness self-test).
    #[arg(long, hide = true, allow_negative_numbers = true)]
    bound_offset: Option<f64>,
}

impl CommonArgs {
    fn overrides(&self) -> Result<Overrides, Error> {
        Ok(Overrides {
            preset: self.preset,
            family: self.family,
            g: self.g,
            m: self.m,
            q: self.q,
            l: self.l,
            omega: self.omega.as_deref().map(OmegaGrid::parse).transpose()?,
            r_grid: self.r_grid.as_deref().map(RGrid::parse).transpose()?,
            out: self.out.clone(),
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            eps_horizon: self.eps_horizon,
            r_far: self.r_far,
        })
    }

    fn resolve(&self) -> Result<RunConfig, Error> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        Ok(RunConfig::layered(&file, &self.overrides()?))
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::ToleranceNotMet { .. } | Error::IntegrationFailure { .. } | Error::NotConverged(_) => {
            EXIT_NON_CONVERGENCE
        }
        _ => EXIT_VALIDATION,
    }
}

/// Writes the buffered CSV to the configured destination. Files are only
/// created once the command has succeeded.
fn emit(config: &RunConfig, csv: &[u8], stdout: &mut dyn Write) -> Result<(), String> {
    match &config.out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|err| format!("cannot write {}: {err}", path.display()))
        }
        None => stdout
            .write_all(csv)
            .map_err(|err| format!("cannot write to stdout: {err}")),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_SUCCESS
            };
            let text = err.render().to_string();
            let _ = if code == EXIT_SUCCESS {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };

    let common = match &cli.command {
        Command::Potential(c) | Command::Bounds(c) | Command::Tortoise(c) => c,
        Command::Verify(v) => &v.common,
    };
    let config = match common.resolve() {
        Ok(config) => config,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            return EXIT_VALIDATION;
        }
    };

    let mut csv = Vec::new();
    let mut code = EXIT_SUCCESS;
    let outcome = match &cli.command {
        Command::Potential(_) => cmd_potential(&config, &mut csv, stderr),
        Command::Bounds(_) => cmd_bounds(&config, &mut csv),
        Command::Tortoise(_) => cmd_tortoise(&config, &mut csv, stderr),
        Command::Verify(v) => {
            let hooks = VerifyHooks {
                free_potential: v.free_potential,
                bound_offset: v.bound_offset.unwrap_or(0.0),
            };
            cmd_verify(&config, hooks, &mut csv, stderr).map(|summary| {
                code = if !summary.violations.is_empty() {
                    EXIT_BOUND_VIOLATION
                } else if !summary.failures.is_empty() {
                    EXIT_NON_CONVERGENCE
                } else {
                    EXIT_SUCCESS
                };
            })
        }
    };
    if let Err(err) = outcome {
        let _ = writeln!(stderr, "error: {err}");
        return exit_code_for(&err);
    }
    if let Err(message) = emit(&config, &csv, stdout) {
        let _ = writeln!(stderr, "error: {message}");
        return EXIT_VALIDATION;
    }
    code
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
