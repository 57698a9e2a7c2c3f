use std::sync::Arc;

use rand::RngCore;

use crate::error::Result;
use crate::measures::Hint;
use crate::numerics::{derivative_fd, gradient_fd, second_derivative_fd, Interval};

/// Log-likelihood of a fixed data set as a function of the parameter.
pub type LogLik = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A statistical model `f(x|θ)` with real parameter and data in a box of `ℝ^m`.
pub trait Model1D: Send + Sync {
    fn name(&self) -> &str;

    /// Dimension `m` of one observation.
    fn data_dim(&self) -> usize {
        1
    }

    /// Declared compact data box used for suprema over `x`.
    fn data_box(&self) -> Vec<(f64, f64)>;

    fn param_space(&self) -> Interval;

    /// Full data space of a one-dimensional observation, for normalisation checks.
    fn data_support(&self) -> Option<Interval> {
        None
    }

    /// `log f(x|θ)`, `-∞` outside the positivity set.
    fn log_likelihood(&self, x: &[f64], theta: f64) -> f64;

    /// `θ ↦ Σ_i log f(x_i|θ)` for a sample.
    fn log_likelihood_n(&self, xs: &[Vec<f64>]) -> LogLik;

    /// Parameters with `f(x_i|θ) > 0` for every observation; `None` if empty.
    fn positivity(&self, _xs: &[Vec<f64>]) -> Option<Interval> {
        Some(self.param_space())
    }

    /// True when the positivity set in `θ` depends on the data.
    fn has_moving_support(&self) -> bool {
        false
    }

    /// `∇_x log f(x|θ)`.
    fn score_x(&self, x: &[f64], theta: f64) -> Result<Vec<f64>> {
        gradient_fd(|y| self.log_likelihood(y, theta), x, None)
    }

    /// `∂_θ ∇_x log f(x|θ)`.
    fn mixed_derivative(&self, x: &[f64], theta: f64) -> Result<Vec<f64>> {
        let m = x.len();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            out.push(derivative_fd(
                |t| self.score_x(x, t).map(|s| s[i]).unwrap_or(f64::NAN),
                theta,
                None,
            )?);
        }
        Ok(out)
    }

    /// `-∂²_θ log f(x|θ)`.
    fn neg_hess_theta(&self, x: &[f64], theta: f64) -> Result<f64> {
        Ok(-second_derivative_fd(|t| self.log_likelihood(x, t), theta, None)?)
    }

    /// Location/scale guess for the posterior under `n` observations.
    fn hint(&self, _xs: &[Vec<f64>]) -> Option<Hint> {
        None
    }

    /// One draw from `f(·|θ)`, if the model is samplable.
    fn sample(&self, _theta: f64, _rng: &mut dyn RngCore) -> Option<Vec<f64>> {
        None
    }
}
