//! Run configuration, read from TOML.
//!
//! Every section is optional; command-line flags override the file. Unknown
//! keys are rejected so that a typo never silently falls back to a default.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wellposed::models::{ModelSpec, PriorSpec};
use wellposed::poincare::Criterion;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Certify,
    Verify,
    Contraction,
    Renyi,
    Wiener,
    Poincare,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Certify => "certify",
            Command::Verify => "verify",
            Command::Contraction => "contraction",
            Command::Renyi => "renyi",
            Command::Wiener => "wiener",
            Command::Poincare => "poincare",
        }
    }
}

/// Certificate constructions selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum RouteChoice {
    /// Conjugate exponential family, `Lip(T)/α`.
    Expfam,
    /// Exponential family on the real line via the log-concave variance bound.
    ExpfamBobkov,
    /// `n` exchangeable observations through the mean statistic.
    ExchN,
    Tv,
    W1,
    W2,
    MixedScore,
    /// `W2` through a Sobolev embedding with a flat prior.
    Sobolev,
    Pareto,
    ParetoMsample,
    Maintrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoincareTarget {
    Prior,
    Posterior,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub model: Option<ModelSpec>,
    pub prior: Option<PriorSpec>,
    #[serde(default)]
    pub certify: CertifySection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub contraction: ContractionSection,
    #[serde(default)]
    pub renyi: RenyiSection,
    #[serde(default)]
    pub wiener: WienerSection,
    #[serde(default)]
    pub poincare: PoincareSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertifySection {
    pub route: Option<RouteChoice>,
    pub x_box: Option<(f64, f64)>,
    pub grid: usize,
    /// Poincaré criterion for the `w2` and `mixed_score` routes.
    pub criterion: Criterion,
    /// Sample size for `exch_n`.
    pub n: Option<usize>,
    /// Exponent of the `w1` route.
    pub w1_p: f64,
    pub sobolev_p: Option<f64>,
    pub sobolev_constant: Option<f64>,
}

impl Default for CertifySection {
    fn default() -> Self {
        Self {
            route: None,
            x_box: None,
            grid: wellposed::bounds::DEFAULT_GRID,
            criterion: Criterion::BakryEmery,
            n: None,
            w1_p: 2.0,
            sobolev_p: None,
            sobolev_constant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub n_pairs: usize,
    /// Sweep box; defaults to `[certify] x_box`, then to the model data box.
    pub x_box: Option<(f64, f64)>,
    /// Largest accepted max/median ratio for grid sweeps.
    pub max_spread: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { n_pairs: 200, x_box: None, max_spread: 5.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContractionSection {
    pub theta0: Option<f64>,
    pub n_values: Vec<usize>,
    pub replications: usize,
    /// Accepted interval for the fitted slope; no check when absent.
    pub slope_range: Option<(f64, f64)>,
}

impl Default for ContractionSection {
    fn default() -> Self {
        Self { theta0: None, n_values: vec![10, 30, 100, 300, 1000], replications: 50, slope_range: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RenyiSection {
    pub x_box: Option<(f64, f64)>,
    pub k_cells: Vec<usize>,
    pub probes: usize,
    /// Lipschitz constant for the bound; certified with `[certify]` when absent.
    pub lipschitz: Option<f64>,
}

impl Default for RenyiSection {
    fn default() -> Self {
        Self { x_box: None, k_cells: vec![4, 8, 16], probes: 65, lipschitz: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WienerSection {
    pub j_values: Vec<usize>,
    pub n_pairs: usize,
    pub x_pairs: Vec<(f64, f64)>,
    /// Largest accepted `max/min - 1` of the per-j constants.
    pub max_spread: f64,
}

impl Default for WienerSection {
    fn default() -> Self {
        Self { j_values: vec![4, 8, 16, 32], n_pairs: 64, x_pairs: Vec::new(), max_spread: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PoincareSection {
    pub target: PoincareTarget,
    /// Data points for `target = "posterior"`.
    pub x: Vec<f64>,
    pub oracle_grid: usize,
    pub tolerance: f64,
}

impl Default for PoincareSection {
    fn default() -> Self {
        Self { target: PoincareTarget::Prior, x: vec![-2.0, 0.0, 2.0], oracle_grid: 2000, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: "out".into(), format: Format::Json }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config { origin: origin.to_string(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config { origin: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}
