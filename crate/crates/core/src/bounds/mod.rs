//! Lipschitz certificates for posterior maps `x ↦ π(·|x)`.
//!
//! Every route returns a [`LipschitzCertificate`] holding the constant, the
//! metric it controls and the intermediate quantities used to build it. Data
//! suprema are taken over a declared box with a uniform grid refined at the
//! argmax, and the box is recorded in the certificate.

mod audit;
mod expfam;
mod fisher;
mod pareto;
mod routes;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use audit::{poincare_audit, AuditEntry, PoincareAudit};
pub use expfam::{lipschitz_exch_n, lipschitz_expfam, lipschitz_expfam_bobkov};
pub use fisher::{fisher_j, fisher_values, null_mean, FisherValues, ScoreMoments};
pub use pareto::{
    lipschitz_pareto, maintrace_1d, neumann_du, neumann_solve_1d, pareto_cq, pareto_neumann, NeumannSolution,
    ParetoVariant, PriorDensity,
};
pub use routes::{
    lipschitz_tv, lipschitz_w1, lipschitz_w2, lipschitz_w2_sobolev, posterior_poincare, W2Variant,
};

pub const DEFAULT_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Tv,
    W1,
    W2,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Tv => "tv",
            Metric::W1 => "w1",
            Metric::W2 => "w2",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    TvScore,
    W1Score,
    W2Fisher,
    W2Sobolev,
    MixedScore,
    Expfam,
    ParetoCq,
    ParetoMsample,
    ExchN,
    Maintrace1d,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::TvScore => "tv_score",
            Route::W1Score => "w1_score",
            Route::W2Fisher => "w2_fisher",
            Route::W2Sobolev => "w2_sobolev",
            Route::MixedScore => "w2_mixed_score",
            Route::Expfam => "expfam",
            Route::ParetoCq => "pareto_cq",
            Route::ParetoMsample => "pareto_msample",
            Route::ExchN => "exch_n",
            Route::Maintrace1d => "maintrace_1d",
        }
    }

    /// The only metric a route certifies.
    pub fn metric(self) -> Metric {
        match self {
            Route::TvScore => Metric::Tv,
            Route::W1Score => Metric::W1,
            _ => Metric::W2,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The data region a supremum was taken over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupDomain {
    pub x_box: Vec<(f64, f64)>,
    pub grid: usize,
    /// Data point attaining the grid maximum, when one exists.
    pub argmax: Option<f64>,
}

impl SupDomain {
    pub fn new(x_box: Vec<(f64, f64)>, grid: usize) -> Self {
        Self { x_box, grid, argmax: None }
    }

    /// Closed-form certificates do not search over data.
    pub fn closed_form() -> Self {
        Self { x_box: Vec::new(), grid: 0, argmax: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCertificate {
    #[serde(rename = "L")]
    pub l: f64,
    pub metric: Metric,
    pub route: Route,
    pub sup_domain: SupDomain,
    pub components: BTreeMap<String, f64>,
}

impl LipschitzCertificate {
    pub fn new(l: f64, route: Route, sup_domain: SupDomain, components: BTreeMap<String, f64>) -> Result<Self> {
        if !(l >= 0.0) || !l.is_finite() {
            return Err(Error::NonConvergent(format!("{route}: Lipschitz constant is not finite ({l})")));
        }
        Ok(Self { l, metric: route.metric(), route, sup_domain, components })
    }

    pub fn component(&self, key: &str) -> Option<f64> {
        self.components.get(key).copied()
    }

    pub fn x_box(&self) -> Option<(f64, f64)> {
        self.sup_domain.x_box.first().copied()
    }
}

/// A one-dimensional data box `(lo, hi)` with `lo < hi`.
pub(crate) fn check_box(x_box: (f64, f64)) -> Result<()> {
    if !(x_box.0 < x_box.1) || !x_box.0.is_finite() || !x_box.1.is_finite() {
        return Err(Error::InvalidInput(format!("data box must be a finite interval, got {x_box:?}")));
    }
    Ok(())
}

pub(crate) fn components<const N: usize>(items: [(&str, f64); N]) -> BTreeMap<String, f64> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests;
