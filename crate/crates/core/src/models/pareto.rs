//! Pareto-type models whose parameter support is truncated by the data.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use super::model::{LogLik, Model1D};
use crate::error::{Error, Result};
use crate::measures::rng::open_unit;
use crate::numerics::Interval;

/// `f(x|θ) = θ/x² · 1{θ < x}` on `x > 1`, `θ ∈ (1, θ₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoModel {
    theta0: f64,
    data_box: (f64, f64),
}

impl ParetoModel {
    /// `theta0` may be `f64::INFINITY`.
    pub fn new(theta0: f64) -> Result<Self> {
        if !(theta0 > 1.0) {
            return Err(Error::InvalidInput(format!("theta0 must exceed 1, got {theta0}")));
        }
        let upper = if theta0.is_finite() { theta0 + 1.0 } else { 4.0 };
        Ok(Self { theta0, data_box: (1.0, upper) })
    }

    pub fn with_data_box(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 1.0 && hi > lo) {
            return Err(Error::InvalidInput(format!("Pareto data box must lie in [1, ∞), got ({lo}, {hi})")));
        }
        self.data_box = (lo, hi);
        Ok(self)
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }
}

impl Model1D for ParetoModel {
    fn name(&self) -> &str {
        "pareto_1d"
    }

    fn data_box(&self) -> Vec<(f64, f64)> {
        vec![self.data_box]
    }

    fn param_space(&self) -> Interval {
        Interval::new(1.0, self.theta0).expect("theta0 > 1")
    }

    fn data_support(&self) -> Option<Interval> {
        Some(Interval::new(1.0, f64::INFINITY).expect("valid"))
    }

    fn log_likelihood(&self, x: &[f64], theta: f64) -> f64 {
        if theta > 1.0 && theta < self.theta0 && theta < x[0] {
            theta.ln() - 2.0 * x[0].ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn log_likelihood_n(&self, xs: &[Vec<f64>]) -> LogLik {
        let n = xs.len() as f64;
        let xmin = xs.iter().map(|x| x[0]).fold(f64::INFINITY, f64::min);
        let logs: f64 = xs.iter().map(|x| 2.0 * x[0].ln()).sum();
        let theta0 = self.theta0;
        Arc::new(move |t| {
            if t > 1.0 && t < theta0 && t < xmin {
                n * t.ln() - logs
            } else {
                f64::NEG_INFINITY
            }
        })
    }

    fn positivity(&self, xs: &[Vec<f64>]) -> Option<Interval> {
        let xmin = xs.iter().map(|x| x[0]).fold(f64::INFINITY, f64::min);
        Interval::new(1.0, xmin.min(self.theta0)).ok()
    }

    fn has_moving_support(&self) -> bool {
        true
    }

    fn score_x(&self, x: &[f64], _theta: f64) -> Result<Vec<f64>> {
        Ok(vec![-2.0 / x[0]])
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> Option<Vec<f64>> {
        Some(vec![theta / open_unit(rng)])
    }
}

/// `m` observations entering through their sum `s`: `f(x|θ) = θ·1{θ < s}/s^{m+1}` on `θ > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSampleModel {
    m: usize,
    theta0: f64,
    data_box: Vec<(f64, f64)>,
}

impl ParetoSampleModel {
    pub fn new(m: usize, theta0: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        if !(theta0 > 1.0) {
            return Err(Error::InvalidInput(format!("theta0 must exceed 1, got {theta0}")));
        }
        let mf = m as f64;
        Ok(Self { m, theta0, data_box: vec![(1.0 / mf, 3.0 / mf); m] })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }
}

impl Model1D for ParetoSampleModel {
    fn name(&self) -> &str {
        "pareto_msample"
    }

    fn data_dim(&self) -> usize {
        self.m
    }

    fn data_box(&self) -> Vec<(f64, f64)> {
        self.data_box.clone()
    }

    fn param_space(&self) -> Interval {
        Interval::new(1.0, self.theta0).expect("theta0 > 1")
    }

    fn data_support(&self) -> Option<Interval> {
        (self.m == 1).then(|| Interval::new(0.0, f64::INFINITY).expect("valid"))
    }

    fn log_likelihood(&self, x: &[f64], theta: f64) -> f64 {
        let s: f64 = x.iter().sum();
        if theta > 1.0 && theta < self.theta0 && theta < s {
            theta.ln() - (self.m as f64 + 1.0) * s.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn log_likelihood_n(&self, xs: &[Vec<f64>]) -> LogLik {
        let sums: Vec<f64> = xs.iter().map(|x| x.iter().sum()).collect();
        let smin = sums.iter().copied().fold(f64::INFINITY, f64::min);
        let logs: f64 = sums.iter().map(|s| (self.m as f64 + 1.0) * s.ln()).sum();
        let n = xs.len() as f64;
        let theta0 = self.theta0;
        Arc::new(move |t| {
            if t > 1.0 && t < theta0 && t < smin {
                n * t.ln() - logs
            } else {
                f64::NEG_INFINITY
            }
        })
    }

    fn positivity(&self, xs: &[Vec<f64>]) -> Option<Interval> {
        let smin = xs.iter().map(|x| x.iter().sum::<f64>()).fold(f64::INFINITY, f64::min);
        Interval::new(1.0, smin.min(self.theta0)).ok()
    }

    fn has_moving_support(&self) -> bool {
        true
    }

    fn score_x(&self, x: &[f64], _theta: f64) -> Result<Vec<f64>> {
        let s: f64 = x.iter().sum();
        Ok(vec![-(self.m as f64 + 1.0) / s; self.m])
    }
}

type DataFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type ParamFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `f(x|θ) = a(θ) b(x) 1{1 < θ < h(x)}` with `h ≥ 1` increasing in each coordinate.
#[derive(Clone)]
pub struct ParetoHModel {
    a: ParamFn,
    log_b: DataFn,
    h: DataFn,
    /// `sup_x |∇h(x)|` over the data box.
    grad_sup: f64,
    data_box: Vec<(f64, f64)>,
}

impl fmt::Debug for ParetoHModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParetoHModel").field("grad_sup", &self.grad_sup).field("data_box", &self.data_box).finish()
    }
}

impl ParetoHModel {
    pub fn new(a: ParamFn, log_b: DataFn, h: DataFn, grad_sup: f64, data_box: Vec<(f64, f64)>) -> Result<Self> {
        if data_box.is_empty() || !(grad_sup >= 0.0) || !grad_sup.is_finite() {
            return Err(Error::InvalidInput("h-model needs a data box and a finite sup |∇h|".into()));
        }
        Ok(Self { a, log_b, h, grad_sup, data_box })
    }

    pub fn a(&self, theta: f64) -> f64 {
        (self.a)(theta)
    }

    pub fn h(&self, x: &[f64]) -> f64 {
        (self.h)(x)
    }

    pub fn grad_sup(&self) -> f64 {
        self.grad_sup
    }

    /// Range of `h` over the corners of the data box (exact for coordinatewise increasing `h`).
    pub fn h_range(&self) -> (f64, f64) {
        let lo: Vec<f64> = self.data_box.iter().map(|b| b.0).collect();
        let hi: Vec<f64> = self.data_box.iter().map(|b| b.1).collect();
        ((self.h)(&lo), (self.h)(&hi))
    }
}

impl Model1D for ParetoHModel {
    fn name(&self) -> &str {
        "pareto_h"
    }

    fn data_dim(&self) -> usize {
        self.data_box.len()
    }

    fn data_box(&self) -> Vec<(f64, f64)> {
        self.data_box.clone()
    }

    fn param_space(&self) -> Interval {
        Interval::new(1.0, f64::INFINITY).expect("valid")
    }

    fn log_likelihood(&self, x: &[f64], theta: f64) -> f64 {
        if theta > 1.0 && theta < (self.h)(x) {
            (self.a)(theta).ln() + (self.log_b)(x)
        } else {
            f64::NEG_INFINITY
        }
    }

    fn log_likelihood_n(&self, xs: &[Vec<f64>]) -> LogLik {
        let hmin = xs.iter().map(|x| (self.h)(x)).fold(f64::INFINITY, f64::min);
        let bsum: f64 = xs.iter().map(|x| (self.log_b)(x)).sum();
        let n = xs.len() as f64;
        let a = Arc::clone(&self.a);
        Arc::new(move |t| if t > 1.0 && t < hmin { n * a(t).ln() + bsum } else { f64::NEG_INFINITY })
    }

    fn positivity(&self, xs: &[Vec<f64>]) -> Option<Interval> {
        let hmin = xs.iter().map(|x| (self.h)(x)).fold(f64::INFINITY, f64::min);
        Interval::new(1.0, hmin).ok()
    }

    fn has_moving_support(&self) -> bool {
        true
    }
}
