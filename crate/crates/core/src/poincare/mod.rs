//! Upper bounds on Poincaré constants.
//!
//! Every bound returns a [`PoincareBound`] tagged with the criterion that
//! produced it, so certificates can record where each constant came from.
//! The numeric oracle lives in [`crate::numerics::poincare_constant_1d_numeric`].

mod francesi;
mod muckenhoupt;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use francesi::{bound_francesi, FnPotential, FrancesiParams, FrancesiVariant, Potential, ZeroPotential};
pub use muckenhoupt::{bound_muckenhoupt_1d, MuckenhouptBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    PayneWeinberger,
    LogConcaveDiam,
    BakryEmery,
    Bobkov,
    HolleyStroock,
    Muckenhoupt1d,
    Francesi1,
    Francesi2,
    Francesi3,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::PayneWeinberger => "payne_weinberger",
            Criterion::LogConcaveDiam => "log_concave_diam",
            Criterion::BakryEmery => "bakry_emery",
            Criterion::Bobkov => "bobkov",
            Criterion::HolleyStroock => "holley_stroock",
            Criterion::Muckenhoupt1d => "muckenhoupt_1d",
            Criterion::Francesi1 => "francesi_1",
            Criterion::Francesi2 => "francesi_2",
            Criterion::Francesi3 => "francesi_3",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An upper bound `value` on the Poincaré constant of order `order_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareBound {
    pub value: f64,
    pub order_q: f64,
    pub criterion: Criterion,
    /// Human-readable record of the inputs, e.g. `"alpha=2"`.
    pub inputs_digest: String,
}

impl PoincareBound {
    pub(crate) fn new(value: f64, criterion: Criterion, inputs_digest: String) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NumericalFailure(format!("{criterion} bound is {value}")));
        }
        Ok(Self { value, order_q: 2.0, criterion, inputs_digest })
    }
}

fn check_diam(diam: f64) -> Result<()> {
    if diam.is_finite() && diam > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("diameter must be positive and finite, got {diam}")))
    }
}

/// Lebesgue measure on a bounded convex set: `diam / π`.
pub fn bound_payne_weinberger(diam: f64) -> Result<PoincareBound> {
    check_diam(diam)?;
    PoincareBound::new(diam / PI, Criterion::PayneWeinberger, format!("diam={diam}"))
}

/// Log-concave measure on a bounded convex set: `diam / π`.
pub fn bound_log_concave_diam(diam: f64) -> Result<PoincareBound> {
    check_diam(diam)?;
    PoincareBound::new(diam / PI, Criterion::LogConcaveDiam, format!("diam={diam}"))
}

/// `e^{-V}` with `Hess V ≥ α I`: `1/√α`.
pub fn bound_bakry_emery(alpha: f64) -> Result<PoincareBound> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidCurvature(alpha));
    }
    PoincareBound::new(1.0 / alpha.sqrt(), Criterion::BakryEmery, format!("alpha={alpha}"))
}

/// Log-concave probability measure with the given variance: `12√3 · √variance`.
pub fn bound_bobkov(variance: f64, dim: usize) -> Result<PoincareBound> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::InvalidInput(format!("variance must be positive, got {variance}")));
    }
    let value = 12.0 * 3f64.sqrt() * variance.sqrt();
    PoincareBound::new(value, Criterion::Bobkov, format!("variance={variance}, dim={dim}"))
}

/// Bounded perturbation `e^{-V} ν` of a measure with bound `base`, where
/// `osc = sup V - inf V`: `base · e^{osc/2}`.
pub fn bound_holley_stroock(base: &PoincareBound, osc: f64) -> Result<PoincareBound> {
    if !(osc >= 0.0) || !osc.is_finite() {
        return Err(Error::InvalidInput(format!("oscillation must be finite and nonnegative, got {osc}")));
    }
    let digest = format!("base=[{}: {}], osc={osc}", base.criterion, base.value);
    let mut out = PoincareBound::new(base.value * (0.5 * osc).exp(), Criterion::HolleyStroock, digest)?;
    out.order_q = base.order_q;
    Ok(out)
}

/// `sup f - inf f` over a uniform grid of `n` points on `[a, b]`.
pub fn oscillation<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64> {
    let n = n.max(2);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let v = crate::error::check_finite(x, f(x))?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(hi - lo)
}
