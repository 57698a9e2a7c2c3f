use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{Distribution1D, LogDensityFn};
use crate::numerics::{second_derivative_fd, Interval};

/// Serializable description of a built-in prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorSpec {
    Normal { mean: f64, sd: f64 },
    Uniform { a: f64, b: f64 },
    TruncatedExponential { rate: f64, a: f64, b: f64 },
}

/// A prior probability measure `π = e^{-W} dθ` on an interval.
#[derive(Debug, Clone)]
pub struct Prior {
    dist: Distribution1D,
    label: String,
    lambda_w: Option<f64>,
    flat: bool,
}

impl Prior {
    pub fn from_spec(spec: &PriorSpec) -> Result<Self> {
        match *spec {
            PriorSpec::Normal { mean, sd } => Self::normal(mean, sd),
            PriorSpec::Uniform { a, b } => Self::uniform(a, b),
            PriorSpec::TruncatedExponential { rate, a, b } => Self::truncated_exponential(rate, a, b),
        }
    }

    /// `N(mean, sd²)`; `Hess W = 1/sd²`.
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Ok(Self {
            dist: Distribution1D::normal(mean, sd)?,
            label: format!("normal(mean={mean}, sd={sd})"),
            lambda_w: Some(1.0 / (sd * sd)),
            flat: false,
        })
    }

    /// Uniform on `(a, b)`; `W` is constant.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            dist: Distribution1D::uniform(a, b)?,
            label: format!("uniform(a={a}, b={b})"),
            lambda_w: Some(0.0),
            flat: true,
        })
    }

    /// Density `∝ e^{-rate·θ}` on `(a, b)`; `W` is linear.
    pub fn truncated_exponential(rate: f64, a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            dist: Distribution1D::truncated_exponential(rate, a, b)?,
            label: format!("truncated_exponential(rate={rate}, a={a}, b={b})"),
            lambda_w: Some(0.0),
            flat: false,
        })
    }

    /// Arbitrary (unnormalised) log-density. `lambda_w` is a lower bound on
    /// `Hess W` if known; otherwise it is estimated on a grid when needed.
    pub fn custom<F>(label: &str, log_density: F, support: Interval, lambda_w: Option<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Ok(Self {
            dist: Distribution1D::from_log_density(log_density, support)?,
            label: label.to_string(),
            lambda_w,
            flat: false,
        })
    }

    /// Wraps an existing distribution as a prior.
    pub fn from_distribution(label: &str, dist: Distribution1D, lambda_w: Option<f64>) -> Self {
        Self { dist, label: label.to_string(), lambda_w, flat: false }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn distribution(&self) -> &Distribution1D {
        &self.dist
    }

    pub fn support(&self) -> Interval {
        self.dist.support()
    }

    /// Normalised log-density.
    pub fn log_pdf(&self, theta: f64) -> f64 {
        self.dist.log_pdf(theta)
    }

    pub fn pdf(&self, theta: f64) -> f64 {
        self.dist.pdf(theta)
    }

    /// Normalised log-density as a shareable closure.
    pub fn log_pdf_fn(&self) -> LogDensityFn {
        let d = self.dist.clone();
        Arc::new(move |t| d.log_pdf(t))
    }

    /// True when the density is constant on its support.
    pub fn is_flat(&self) -> bool {
        self.flat
    }

    /// Lower bound on `Hess W` (the least eigenvalue, `λ_*`), when known in closed form.
    pub fn lambda_w(&self) -> Option<f64> {
        self.lambda_w
    }

    /// `λ_*`, falling back to the minimum of the finite-difference second
    /// derivative of `W` over `n` points of the mass window.
    pub fn lambda_w_or_estimate(&self, n: usize) -> Result<f64> {
        if let Some(l) = self.lambda_w {
            return Ok(l);
        }
        let (lo, hi) = self.dist.window();
        let mut best = f64::INFINITY;
        for i in 1..n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let w2 = -second_derivative_fd(|s| self.dist.log_pdf(s), t, None)?;
            best = best.min(w2);
        }
        Ok(best)
    }
}

impl TryFrom<&PriorSpec> for Prior {
    type Error = Error;
    fn try_from(spec: &PriorSpec) -> Result<Self> {
        Self::from_spec(spec)
    }
}
