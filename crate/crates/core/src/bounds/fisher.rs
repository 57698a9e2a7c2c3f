use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Distribution1D;
use crate::models::PosteriorKernel;
use crate::numerics::derivative_fd;

/// Fisher functionals of the kernel density at one data point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherValues {
    /// `(∫ |∇_x g|²/g dπ)^{1/2}`.
    pub j_pi: f64,
    /// `(∫ |∂_x p|²/p dθ)^{1/2}` for the posterior density `p`.
    pub j1: f64,
    /// `(∫ |∂_θ p|²/p dθ)^{1/2}`.
    pub j2: f64,
}

/// `Ψ(x, θ) = ∇_x log f(x|θ) - E_post[∇_x log f(x|·)]` on the posterior's quadrature nodes.
///
/// Since `∇_x g = g Ψ`, every norm of `∇_x g` against the prior is a
/// posterior moment of `|Ψ|` weighted by a power of `g`.
#[derive(Debug, Clone)]
pub struct ScoreMoments {
    pub theta: Vec<f64>,
    pub mass: Vec<f64>,
    /// `|Ψ(x, θ)|` (Euclidean norm over data coordinates).
    pub psi: Vec<f64>,
    /// `ln g(x, θ)`, the log posterior-to-prior density ratio.
    pub log_g: Vec<f64>,
    /// Signed first coordinate of `Ψ`.
    pub psi_first: Vec<f64>,
}

impl ScoreMoments {
    /// Fixed-support kernels only; moving supports yield [`Error::ZeroDensity`].
    pub fn compute(kernel: &PosteriorKernel, x: &[f64]) -> Result<Self> {
        let post = kernel.posterior(x)?;
        Self::with_posterior(kernel, x, &post)
    }

    pub fn with_posterior(kernel: &PosteriorKernel, x: &[f64], post: &Distribution1D) -> Result<Self> {
        let model = kernel.model();
        if model.has_moving_support() {
            return Err(Error::ZeroDensity);
        }
        let mut theta = Vec::new();
        let mut mass = Vec::new();
        let mut scores: Vec<Vec<f64>> = Vec::new();
        for (t, m) in post.nodes() {
            if m > 0.0 {
                theta.push(t);
                mass.push(m);
                scores.push(model.score_x(x, t)?);
            }
        }
        let dim = x.len();
        let mut mean = vec![0.0; dim];
        for (s, m) in scores.iter().zip(&mass) {
            for (acc, v) in mean.iter_mut().zip(s) {
                *acc += m * v;
            }
        }
        let psi_vecs: Vec<Vec<f64>> =
            scores.iter().map(|s| s.iter().zip(&mean).map(|(v, mu)| v - mu).collect()).collect();
        let psi = psi_vecs.iter().map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt()).collect();
        let psi_first = psi_vecs.iter().map(|v| v[0]).collect();
        let prior = kernel.prior();
        let log_g = theta.iter().map(|&t| post.log_pdf(t) - prior.log_pdf(t)).collect();
        Ok(Self { theta, mass, psi, log_g, psi_first })
    }

    /// `∫ |Ψ|^p g dπ = E_post |Ψ|^p`.
    pub fn abs_moment(&self, p: f64) -> f64 {
        self.mass.iter().zip(&self.psi).map(|(m, s)| m * s.powf(p)).sum()
    }

    /// `‖∇_x g‖_{L^p_π} = (E_post[g^{p-1} |Ψ|^p])^{1/p}`.
    pub fn grad_g_norm(&self, p: f64) -> f64 {
        let total: f64 = self
            .mass
            .iter()
            .zip(&self.psi)
            .zip(&self.log_g)
            .filter(|((_, s), _)| **s > 0.0)
            .map(|((m, s), lg)| (m.ln() + (p - 1.0) * lg + p * s.ln()).exp())
            .sum();
        total.powf(1.0 / p)
    }

    /// `∫ Ψ g dπ`, zero up to quadrature error.
    pub fn mean_psi(&self) -> f64 {
        self.mass.iter().zip(&self.psi_first).map(|(m, s)| m * s).sum()
    }
}

/// `𝒥_π[g(x,·)] = (∫ |∇_x g|²/g dπ)^{1/2} = (E_post |Ψ|²)^{1/2}`.
pub fn fisher_j(kernel: &PosteriorKernel, x: &[f64]) -> Result<f64> {
    let value = ScoreMoments::compute(kernel, x)?.abs_moment(2.0).sqrt();
    if !value.is_finite() {
        return Err(Error::NonConvergent(format!("Fisher functional diverges at x = {x:?}")));
    }
    Ok(value)
}

/// All three Fisher functionals for a fixed-support kernel.
pub fn fisher_values(kernel: &PosteriorKernel, x: &[f64]) -> Result<FisherValues> {
    let post = kernel.posterior(x)?;
    let sm = ScoreMoments::with_posterior(kernel, x, &post)?;
    let j_pi = sm.abs_moment(2.0).sqrt();
    let mut j2sq = 0.0;
    for (&t, &m) in sm.theta.iter().zip(&sm.mass) {
        let d = derivative_fd(|s| post.log_pdf(s), t, None)?;
        j2sq += m * d * d;
    }
    let values = FisherValues { j_pi, j1: j_pi, j2: j2sq.sqrt() };
    if !values.j_pi.is_finite() || !values.j2.is_finite() {
        return Err(Error::NonConvergent(format!("Fisher functionals diverge at x = {x:?}")));
    }
    Ok(values)
}

/// `|∫ Ψ g dπ|`.
pub fn null_mean(kernel: &PosteriorKernel, x: &[f64]) -> Result<f64> {
    Ok(ScoreMoments::compute(kernel, x)?.mean_psi().abs())
}
