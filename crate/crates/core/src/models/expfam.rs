use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use super::model::{LogLik, Model1D};
use crate::error::{Error, Result};
use crate::measures::rng::{open_unit, standard_normal};
use crate::measures::Hint;
use crate::numerics::Interval;

type DataFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type DataGrad = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type ParamFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Sampler = Arc<dyn Fn(f64, &mut dyn RngCore) -> Vec<f64> + Send + Sync>;

/// Canonical exponential family `f(x|θ) = h(x) exp(T(x)θ - M(θ))` with a real parameter.
#[derive(Clone)]
pub struct ExpFamilyModel {
    name: String,
    data_dim: usize,
    data_box: Vec<(f64, f64)>,
    data_support: Option<Interval>,
    t: DataFn,
    grad_t: DataGrad,
    lip_t: f64,
    log_h: DataFn,
    m: ParamFn,
    dm: ParamFn,
    d2m: ParamFn,
    hess_m_lower: f64,
    theta: Interval,
    sampler: Option<Sampler>,
    /// Inverse of `M'`, the maximum-likelihood map from the mean statistic.
    mle: Option<ParamFn>,
}

impl fmt::Debug for ExpFamilyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpFamilyModel")
            .field("name", &self.name)
            .field("data_box", &self.data_box)
            .field("lip_t", &self.lip_t)
            .field("hess_m_lower", &self.hess_m_lower)
            .field("theta", &self.theta)
            .finish()
    }
}

/// Ingredients of a user-defined exponential family.
pub struct ExpFamilyParts {
    pub name: String,
    pub data_box: Vec<(f64, f64)>,
    pub t: DataFn,
    pub grad_t: DataGrad,
    pub lip_t: f64,
    pub log_h: DataFn,
    pub m: ParamFn,
    pub dm: ParamFn,
    pub d2m: ParamFn,
    pub theta: Interval,
}

impl ExpFamilyModel {
    /// Location model `x ~ N(θ, σ²)`: `T(x) = x/σ²`, `M(θ) = θ²/(2σ²)`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidInput(format!("sigma must be positive, got {sigma}")));
        }
        let s2 = sigma * sigma;
        Ok(Self {
            name: "gaussian_location".into(),
            data_dim: 1,
            data_box: vec![(-3.0, 3.0)],
            data_support: Some(Interval::real_line()),
            t: Arc::new(move |x| x[0] / s2),
            grad_t: Arc::new(move |_| vec![1.0 / s2]),
            lip_t: 1.0 / s2,
            log_h: Arc::new(move |x| -0.5 * x[0] * x[0] / s2 - 0.5 * (2.0 * PI * s2).ln()),
            m: Arc::new(move |t| 0.5 * t * t / s2),
            dm: Arc::new(move |t| t / s2),
            d2m: Arc::new(move |_| 1.0 / s2),
            hess_m_lower: 1.0 / s2,
            theta: Interval::real_line(),
            sampler: Some(Arc::new(move |theta, rng| vec![theta + sigma * standard_normal(rng)])),
            mle: Some(Arc::new(move |t| s2 * t)),
        })
    }

    /// Rate model `x ~ Exp(θ)`: `T(x) = -x`, `M(θ) = -ln θ` on `θ > 0`.
    pub fn exponential_rate() -> Self {
        Self {
            name: "exponential_rate".into(),
            data_dim: 1,
            data_box: vec![(0.05, 5.0)],
            data_support: Some(Interval::positive_half_line()),
            t: Arc::new(|x| -x[0]),
            grad_t: Arc::new(|_| vec![-1.0]),
            lip_t: 1.0,
            log_h: Arc::new(|_| 0.0),
            m: Arc::new(|t| -t.ln()),
            dm: Arc::new(|t| -1.0 / t),
            d2m: Arc::new(|t| 1.0 / (t * t)),
            hess_m_lower: 0.0,
            theta: Interval::positive_half_line(),
            sampler: Some(Arc::new(|theta, rng| vec![-open_unit(rng).ln() / theta])),
            mle: Some(Arc::new(|t| -1.0 / t)),
        }
    }

    /// User-defined family. Convexity of `M` is checked on a grid of `Θ`
    /// (clipped to `[-10, 10]`) and `inf M''` over that grid is recorded.
    pub fn custom(parts: ExpFamilyParts) -> Result<Self> {
        let ExpFamilyParts { name, data_box, t, grad_t, lip_t, log_h, m, dm, d2m, theta } = parts;
        if data_box.is_empty() || data_box.iter().any(|&(a, b)| !(a < b)) {
            return Err(Error::InvalidInput("data box must be a nonempty product of intervals".into()));
        }
        if !(lip_t >= 0.0) || !lip_t.is_finite() {
            return Err(Error::InvalidInput(format!("Lip(T) must be finite and nonnegative, got {lip_t}")));
        }
        let (lo, hi) = (theta.lo().max(-10.0), theta.hi().min(10.0));
        let mut lower = f64::INFINITY;
        for i in 1..256 {
            let t0 = lo + (hi - lo) * i as f64 / 256.0;
            let h = d2m(t0);
            if !(h >= -1e-12) {
                return Err(Error::InvalidInput(format!("M is not convex: M''({t0}) = {h}")));
            }
            lower = lower.min(h);
        }
        Ok(Self {
            name,
            data_dim: data_box.len(),
            data_box,
            data_support: None,
            t,
            grad_t,
            lip_t,
            log_h,
            m,
            dm,
            d2m,
            hess_m_lower: lower.max(0.0),
            theta,
            sampler: None,
            mle: None,
        })
    }

    pub fn with_data_box(mut self, data_box: Vec<(f64, f64)>) -> Self {
        self.data_dim = data_box.len();
        self.data_box = data_box;
        self
    }

    pub fn statistic(&self, x: &[f64]) -> f64 {
        (self.t)(x)
    }

    /// Mean sufficient statistic `(1/n) Σ T(x_i)`.
    pub fn mean_statistic(&self, xs: &[Vec<f64>]) -> f64 {
        xs.iter().map(|x| (self.t)(x)).sum::<f64>() / xs.len() as f64
    }

    pub fn lip_t(&self) -> f64 {
        self.lip_t
    }

    /// `inf_Θ M''`.
    pub fn hess_m_lower(&self) -> f64 {
        self.hess_m_lower
    }

    pub fn log_partition(&self, theta: f64) -> f64 {
        (self.m)(theta)
    }

    pub fn log_partition_d1(&self, theta: f64) -> f64 {
        (self.dm)(theta)
    }

    pub fn log_partition_d2(&self, theta: f64) -> f64 {
        (self.d2m)(theta)
    }

    /// Log-likelihood of `n` observations with mean statistic `tbar`, up to the `h` terms.
    pub fn log_likelihood_stat(&self, tbar: f64, n: usize) -> LogLik {
        let m = Arc::clone(&self.m);
        let theta = self.theta;
        let nf = n as f64;
        Arc::new(move |t| if theta.contains(t) { nf * (tbar * t - m(t)) } else { f64::NEG_INFINITY })
    }
}

impl Model1D for ExpFamilyModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn data_dim(&self) -> usize {
        self.data_dim
    }

    fn data_box(&self) -> Vec<(f64, f64)> {
        self.data_box.clone()
    }

    fn param_space(&self) -> Interval {
        self.theta
    }

    fn data_support(&self) -> Option<Interval> {
        self.data_support
    }

    fn log_likelihood(&self, x: &[f64], theta: f64) -> f64 {
        if !self.theta.contains(theta) {
            return f64::NEG_INFINITY;
        }
        (self.t)(x) * theta - (self.m)(theta) + (self.log_h)(x)
    }

    fn log_likelihood_n(&self, xs: &[Vec<f64>]) -> LogLik {
        let tsum: f64 = xs.iter().map(|x| (self.t)(x)).sum();
        let hsum: f64 = xs.iter().map(|x| (self.log_h)(x)).sum();
        let n = xs.len() as f64;
        let m = Arc::clone(&self.m);
        let theta = self.theta;
        Arc::new(move |t| if theta.contains(t) { tsum * t - n * m(t) + hsum } else { f64::NEG_INFINITY })
    }

    fn score_x(&self, x: &[f64], theta: f64) -> Result<Vec<f64>> {
        Ok((self.grad_t)(x).into_iter().map(|g| g * theta).collect())
    }

    fn mixed_derivative(&self, x: &[f64], _theta: f64) -> Result<Vec<f64>> {
        Ok((self.grad_t)(x))
    }

    fn neg_hess_theta(&self, _x: &[f64], theta: f64) -> Result<f64> {
        Ok((self.d2m)(theta))
    }

    fn hint(&self, xs: &[Vec<f64>]) -> Option<Hint> {
        let mle = self.mle.as_ref()?;
        let center = mle(self.mean_statistic(xs));
        if !self.theta.contains(center) {
            return None;
        }
        let scale = 1.0 / (xs.len() as f64 * (self.d2m)(center)).sqrt();
        (scale.is_finite() && scale > 0.0).then_some(Hint { center, scale })
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> Option<Vec<f64>> {
        self.sampler.as_ref().map(|s| s(theta, rng))
    }
}
