use std::sync::Arc;

use super::model::Model1D;
use super::Prior;
use crate::error::{Error, Result};
use crate::measures::Distribution1D;

/// Absolute evidence tolerance, applied per observation in log space.
pub const TOL_EVIDENCE: f64 = 1e-300;

/// The Bayes map `x ↦ π(·|x)` for a model and a prior.
#[derive(Clone)]
pub struct PosteriorKernel {
    model: Arc<dyn Model1D>,
    prior: Prior,
}

impl std::fmt::Debug for PosteriorKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PosteriorKernel").field("model", &self.model.name()).field("prior", &self.prior.label()).finish()
    }
}

/// A posterior together with the log of its evidence `ρ`.
#[derive(Debug, Clone)]
pub struct Posterior {
    pub dist: Distribution1D,
    pub log_evidence: f64,
}

impl PosteriorKernel {
    pub fn new(model: Arc<dyn Model1D>, prior: Prior) -> Self {
        Self { model, prior }
    }

    pub fn model(&self) -> &dyn Model1D {
        &*self.model
    }

    pub fn model_arc(&self) -> &Arc<dyn Model1D> {
        &self.model
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn posterior(&self, x: &[f64]) -> Result<Distribution1D> {
        self.posterior_n(&[x.to_vec()])
    }

    pub fn posterior_n(&self, xs: &[Vec<f64>]) -> Result<Distribution1D> {
        self.posterior_with_evidence(xs).map(|p| p.dist)
    }

    /// Posterior under the product likelihood of `xs`. Fails with
    /// [`Error::ZeroEvidence`] when `ρ_n(xs) ≤ TOL_EVIDENCE^n`.
    pub fn posterior_with_evidence(&self, xs: &[Vec<f64>]) -> Result<Posterior> {
        if xs.is_empty() {
            return Err(Error::InvalidInput("at least one observation is required".into()));
        }
        let dim = self.model.data_dim();
        if let Some(bad) = xs.iter().find(|x| x.len() != dim) {
            return Err(Error::InvalidInput(format!("observation has {} coordinates, model expects {dim}", bad.len())));
        }
        let flat = || xs.iter().flatten().copied().collect::<Vec<f64>>();
        let zero = |evidence: f64| Error::ZeroEvidence { x: flat(), evidence };
        let support = self
            .model
            .positivity(xs)
            .and_then(|p| p.intersect(&self.prior.support()))
            .ok_or_else(|| zero(0.0))?;
        let loglik = self.model.log_likelihood_n(xs);
        let prior = self.prior.distribution().clone();
        let log_density = move |t: f64| loglik(t) + prior.log_pdf(t);
        let built = match self.model.hint(xs) {
            Some(h) => Distribution1D::from_log_density_hint(log_density, support, h),
            None => Distribution1D::from_log_density(log_density, support),
        };
        let dist = match built {
            Ok(d) => d,
            Err(Error::Degenerate(_)) | Err(Error::ZeroDensity) => return Err(zero(0.0)),
            Err(e) => return Err(e),
        };
        let log_evidence = dist.log_normalizer();
        if !(log_evidence > xs.len() as f64 * TOL_EVIDENCE.ln()) {
            return Err(zero(log_evidence.exp()));
        }
        Ok(Posterior { dist, log_evidence })
    }

    /// `log g(x, θ)`: posterior log-density relative to the prior.
    pub fn log_g(&self, post: &Distribution1D, theta: f64) -> f64 {
        post.log_pdf(theta) - self.prior.log_pdf(theta)
    }
}

/// Posterior of `model` under `prior` at a single observation.
pub fn posterior(model: Arc<dyn Model1D>, prior: &Prior, x: &[f64]) -> Result<Distribution1D> {
    PosteriorKernel::new(model, prior.clone()).posterior(x)
}

/// Posterior under `n` exchangeable observations.
pub fn posterior_n(model: Arc<dyn Model1D>, prior: &Prior, xs: &[Vec<f64>]) -> Result<Distribution1D> {
    PosteriorKernel::new(model, prior.clone()).posterior_n(xs)
}
