//! Configuration-driven runner behind the `wellposed` binary.
//!
//! A run resolves a [`RunConfig`] (TOML file plus flag overrides), executes one
//! [`Command`] in memory, and only then writes its reports. Exit status:
//! `0` when every check passed, `2` when a check failed (the offending data is
//! in the report), `1` on configuration or numerical errors, in which case no
//! file is written.

mod config;
mod error;
mod output;
mod run;

use std::path::PathBuf;

pub use config::{
    CertifySection, Command, ContractionSection, Format, OutputSection, PoincareSection, PoincareTarget, RenyiSection,
    RouteChoice, RunConfig, VerifySection, WienerSection,
};
pub use error::CliError;
pub use output::{archived_config, config_digest, envelope, sha256_hex, write_reports};
pub use run::{certify, run, RunOutput, SCHEMA_VERSION};

use wellposed::models::ModelSpec;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory; overrides `[output] dir`.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Registry model name, with default parameters; replaces `[model]`.
    #[arg(long, value_name = "NAME")]
    pub model: Option<String>,
    /// Certificate route; overrides `[certify] route`.
    #[arg(long, value_enum)]
    pub route: Option<RouteChoice>,
}

/// Loads the configuration and applies flag overrides.
pub fn resolve_config(command: Command, args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != command {
            return Err(CliError::Config {
                origin: "command".into(),
                message: format!("config is for `{}` but `{}` was requested", c.as_str(), command.as_str()),
            });
        }
    }
    cfg.command = Some(command);
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(name) = &args.model {
        cfg.model = Some(
            ModelSpec::by_name(name).map_err(|e| CliError::Config { origin: "--model".into(), message: e.to_string() })?,
        );
    }
    if let Some(route) = args.route {
        cfg.certify.route = Some(route);
    }
    if let Some(out) = &args.out {
        cfg.output.dir = out.display().to_string();
    }
    if let Some(format) = args.format {
        cfg.output.format = format;
    }
    Ok(cfg)
}

/// Result of [`execute`]: whether every check passed and the files written.
#[derive(Debug, Clone)]
pub struct Execution {
    pub passed: bool,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

pub fn execute(command: Command, args: &CommonArgs) -> Result<Execution, CliError> {
    let cfg = resolve_config(command, args)?;
    let out = run(command, &cfg)?;
    let report = envelope(command, &cfg, &out, output::unix_now())?;
    let files = write_reports(cfg.output.dir.as_ref(), cfg.output.format, command, &report, &out.csv)?;
    Ok(Execution { passed: out.passed, summary: out.summary, files })
}
