use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::rng::stream_rng;
use crate::models::{Model1D, PosteriorKernel, Prior};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionRow {
    pub n: usize,
    pub replication: usize,
    /// `W1(π_n(·|ξ), δ_θ₀) = ∫ |θ - θ₀| dπ_n`; `None` when the replication was discarded.
    pub w1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub n_values: Vec<usize>,
    pub eps_hat: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub replications: usize,
    pub seed: u64,
    pub theta0: f64,
    pub discarded: usize,
    pub rows: Vec<ContractionRow>,
}

/// Ordinary least squares `y = intercept + slope·x`.
pub fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidInput("least squares needs at least two points".into()));
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidInput("least squares needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Monte Carlo `ε̂_n = mean over replications of W1(π_n, δ_θ₀)` and the log-log slope.
///
/// Replication `r` at the `i`-th sample size draws from stream
/// `i·replications + r` of `seed`. Replications with zero evidence are discarded.
pub fn contraction_experiment(
    model: Arc<dyn Model1D>,
    prior: &Prior,
    theta0: f64,
    n_values: &[usize],
    replications: usize,
    seed: u64,
) -> Result<ContractionReport> {
    if replications == 0 || n_values.len() < 2 || n_values.contains(&0) {
        return Err(Error::InvalidInput("need at least two positive sample sizes and one replication".into()));
    }
    if !prior.support().contains(theta0) {
        return Err(Error::InvalidInput(format!("θ₀ = {theta0} is outside the prior support")));
    }
    let kernel = PosteriorKernel::new(Arc::clone(&model), prior.clone());
    let jobs: Vec<(usize, usize, usize)> = n_values
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| (0..replications).map(move |r| (i, n, r)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, n, r)| -> Result<ContractionRow> {
            let mut rng = stream_rng(seed, (i * replications + r) as u64);
            let mut xs = Vec::with_capacity(n);
            for _ in 0..n {
                let x = model
                    .sample(theta0, &mut rng)
                    .ok_or_else(|| Error::InvalidInput(format!("{} cannot be sampled", model.name())))?;
                xs.push(x);
            }
            let w1 = match kernel.posterior_n(&xs) {
                Ok(post) => Some(post.abs_moment_about(theta0)),
                Err(Error::ZeroEvidence { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ContractionRow { n, replication: r, w1 })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut eps_hat = Vec::with_capacity(n_values.len());
    for chunk in rows.chunks(replications) {
        let kept: Vec<f64> = chunk.iter().filter_map(|row| row.w1).collect();
        if kept.is_empty() {
            return Err(Error::ZeroEvidence { x: Vec::new(), evidence: 0.0 });
        }
        eps_hat.push(kept.iter().sum::<f64>() / kept.len() as f64);
    }
    let lx: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = eps_hat.iter().map(|e| e.ln()).collect();
    let (slope, intercept) = ols(&lx, &ly)?;
    let discarded = rows.iter().filter(|r| r.w1.is_none()).count();
    Ok(ContractionReport {
        n_values: n_values.to_vec(),
        eps_hat,
        slope,
        intercept,
        replications,
        seed,
        theta0,
        discarded,
        rows,
    })
}
