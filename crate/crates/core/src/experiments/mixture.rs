use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measures::{log_sum_exp, Distribution1D};
use crate::models::{Model1D, PosteriorKernel, Prior};

#[derive(Debug, Clone)]
pub struct MixturePosterior {
    pub dist: Distribution1D,
    /// `λ_j(x)`, zero for components whose evidence vanishes.
    pub weights: Vec<f64>,
}

/// Posterior under the mixture prior `Σ_j λ_j π_j`: the mixture `Σ_j λ_j(x) π_j(·|x)`
/// with `λ_j(x) ∝ λ_j ∫ f(x|τ) π_j(dτ)`.
pub fn mixture_posterior(components: &[(f64, Prior)], model: Arc<dyn Model1D>, x: &[f64]) -> Result<MixturePosterior> {
    if components.is_empty() {
        return Err(Error::InvalidInput("mixture needs at least one component".into()));
    }
    let total: f64 = components.iter().map(|c| c.0).sum();
    if components.iter().any(|c| !(c.0 >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("mixture weights must be nonnegative and sum to 1, got {total}")));
    }
    let mut logs = Vec::with_capacity(components.len());
    let mut posts = Vec::with_capacity(components.len());
    for (lambda, prior) in components {
        if *lambda == 0.0 {
            logs.push(f64::NEG_INFINITY);
            posts.push(None);
            continue;
        }
        match PosteriorKernel::new(Arc::clone(&model), prior.clone()).posterior_with_evidence(&[x.to_vec()]) {
            Ok(p) => {
                logs.push(lambda.ln() + p.log_evidence);
                posts.push(Some(p.dist));
            }
            Err(Error::ZeroEvidence { .. }) => {
                logs.push(f64::NEG_INFINITY);
                posts.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let norm = log_sum_exp(&logs);
    if !norm.is_finite() {
        return Err(Error::ZeroEvidence { x: x.to_vec(), evidence: 0.0 });
    }
    let weights: Vec<f64> = logs.iter().map(|l| (l - norm).exp()).collect();
    let parts: Vec<(f64, Distribution1D)> = weights
        .iter()
        .zip(posts)
        .filter_map(|(w, p)| p.filter(|_| *w > 0.0).map(|d| (*w, d)))
        .collect();
    let dist = if parts.len() == 1 { parts[0].1.clone() } else { Distribution1D::mixture(&parts)? };
    Ok(MixturePosterior { dist, weights })
}
