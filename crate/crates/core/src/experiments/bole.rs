//! Integrability of `F(1 - F)/f`, the condition under which the empirical
//! measure converges to its law at rate `1/√n` in `W2`.
//!
//! Bounded pieces are integrated directly. On an unbounded side the integrand
//! is probed at distances `r/2` and `r` from the median, `r` being the reach of
//! the mass window; a local power-law exponent below [`DIVERGENCE_EXPONENT`]
//! is reported as divergence, otherwise the power-law tail is added.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::Distribution1D;
use crate::numerics::{integrate, Interval, QuadratureSpec};

/// Tails decaying slower than `|x|^{-1.25}` are declared divergent.
pub const DIVERGENCE_EXPONENT: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BoleOutcome {
    Finite { value: f64 },
    Divergent { side: Side, exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

impl BoleOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            BoleOutcome::Finite { value } => Some(*value),
            BoleOutcome::Divergent { .. } => None,
        }
    }
}

/// `∫ F(x)(1 - F(x))/f(x) dx` over the support of `d`, or the side on which it diverges.
pub fn bole_condition_check(d: &Distribution1D) -> Result<BoleOutcome> {
    let support = d.support();
    let (wlo, whi) = d.window();
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-10).with_max_subdivisions(400);
    let (a, b) = (support.lo(), support.hi());
    let m = d.median();
    // F/f and (1 - F)/f as integrals of exp(log f(t) - log f(x)), which stay
    // accurate where both the tail mass and the density underflow.
    let tail_ratio = |x: f64, lo: f64, hi: f64| -> f64 {
        let lx = d.log_pdf(x);
        match Interval::new(lo, hi) {
            Ok(iv) if hi > lo => integrate(|t| (d.log_pdf(t) - lx).exp(), iv, &spec).map_or(f64::NAN, |i| i.value),
            _ => 0.0,
        }
    };
    let integrand = |x: f64| -> f64 {
        if !(d.log_pdf(x) > f64::NEG_INFINITY) {
            return 0.0;
        }
        if x >= m {
            d.cdf(x) * tail_ratio(x, x, b)
        } else {
            d.survival(x) * tail_ratio(x, a, x)
        }
    };
    let a = if a.is_finite() { a } else { wlo };
    let b = if b.is_finite() { b } else { whi };
    let mut total = 0.0;
    for (lo, hi) in [(a, m), (m, b)] {
        if hi > lo {
            total += integrate(integrand, Interval::new(lo, hi)?, &spec)?.value;
        }
    }
    for (side, infinite, edge) in
        [(Side::Lower, !support.lo().is_finite(), wlo), (Side::Upper, !support.hi().is_finite(), whi)]
    {
        if !infinite {
            continue;
        }
        let r = (edge - m).abs();
        let dir = (edge - m).signum();
        let (near, far) = (integrand(m + dir * 0.5 * r), integrand(edge));
        let exponent = if far > 0.0 && near > 0.0 { (near / far).ln() / 2f64.ln() } else { f64::INFINITY };
        if exponent < DIVERGENCE_EXPONENT {
            return Ok(BoleOutcome::Divergent { side, exponent });
        }
        if exponent.is_finite() {
            total += far * r / (exponent - 1.0);
        }
    }
    Ok(BoleOutcome::Finite { value: total })
}
