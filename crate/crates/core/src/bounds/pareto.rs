//! Moving-support certificates for truncated (Pareto-type) models.
//!
//! The posterior lives on `Θ_x = (1, x ∧ θ₀)` with density `Q(θ)/∫₁ˣ Q`,
//! where `Q(θ) = θ q(θ)`. Its `x`-derivative is carried by the Neumann
//! problem `-(p u')' = ∂_x p̃` with the boundary velocity as flux, which in one
//! dimension integrates in closed form.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_box, components, LipschitzCertificate, Route, SupDomain};
use crate::error::{Error, Result};
use crate::measures::Distribution1D;
use crate::models::ParetoHModel;
use crate::numerics::{derivative_fd, grid_max_refine, integrate, GaussLegendre, Interval, QuadratureSpec};
use crate::poincare::bound_muckenhoupt_1d;

const PANELS: usize = 64;
const ORDER: usize = 16;

type Density<'a> = &'a (dyn Fn(f64) -> f64 + Sync);
pub type PriorDensity = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-300, 1e-12).with_max_subdivisions(500)
}

fn integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let v = integrate(f, Interval::new(a, b)?, &spec())?.value;
    if !v.is_finite() {
        return Err(Error::NonIntegrable(format!("integral over ({a}, {b}) is not finite")));
    }
    Ok(v)
}

/// `C_Q(t) = Q(t) (∫₁ᵗ Q)^{-1/2} (∫₁ᵗ 1/Q)^{1/2}` for a given `Q`.
fn cq_from(big_q: impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::InvalidInput(format!("C_Q needs t > 1, got {t}")));
    }
    let a = integral(&big_q, 1.0, t)?;
    let b = integral(|s| 1.0 / big_q(s), 1.0, t)
        .map_err(|e| Error::NonIntegrable(format!("1/Q is not integrable on (1, {t}): {e}")))?;
    let value = big_q(t) * (b / a).sqrt();
    if !value.is_finite() || !(a > 0.0) {
        return Err(Error::NonIntegrable(format!("C_Q({t}) is not finite")));
    }
    Ok(value)
}

/// `C_Q(t)` with `Q(θ) = θ q(θ)` for a prior density `q` on `(1, θ₀)`.
pub fn pareto_cq(q: Density, t: f64) -> Result<f64> {
    cq_from(|s| s * q(s), t)
}

#[derive(Debug, Clone)]
pub enum ParetoVariant {
    /// One observation, `L = sup_x C_Q(x ∧ θ₀)`.
    OneD,
    /// `m` observations through their sum, `L = √m sup C_Q(Σ x_i)`; the box bounds the sum.
    MSample { m: usize },
    /// `f(x|θ) = a(θ) b(x) 1{θ < h(x)}`, `L = sup|∇h| · sup C_Q(h(x))` with `Q = a q`.
    HFunction(ParetoHModel),
}

/// Pareto certificate: supremum of `C_Q` over the range of the truncation point.
pub fn lipschitz_pareto(
    variant: &ParetoVariant,
    q: Density,
    theta0: f64,
    x_box: (f64, f64),
    grid: usize,
) -> Result<LipschitzCertificate> {
    let (range, prefactor, route) = match variant {
        ParetoVariant::OneD => (x_box, 1.0, Route::ParetoCq),
        ParetoVariant::MSample { m } => {
            if *m == 0 {
                return Err(Error::InvalidInput("sample size must be positive".into()));
            }
            (x_box, (*m as f64).sqrt(), Route::ParetoMsample)
        }
        ParetoVariant::HFunction(h) => (h.h_range(), h.grad_sup(), Route::ParetoCq),
    };
    check_box(range)?;
    let hi = range.1.min(theta0);
    if !(hi > 1.0) {
        return Err(Error::InvalidInput(format!("truncation range {range:?} does not reach past 1")));
    }
    let lo = range.0.max(1.0 + 1e-6 * (hi - 1.0));
    let cq = |t: f64| -> Result<f64> {
        match variant {
            ParetoVariant::HFunction(h) => cq_from(|s| h.a(s) * q(s), t),
            _ => pareto_cq(q, t),
        }
    };
    let (tmax, sup_cq) = if hi > lo { grid_max_refine(cq, lo, hi, grid)? } else { (hi, cq(hi)?) };
    let mut domain = SupDomain::new(vec![x_box], grid);
    domain.argmax = Some(tmax);
    LipschitzCertificate::new(
        prefactor * sup_cq,
        route,
        domain,
        components([("sup_C_Q", sup_cq), ("prefactor", prefactor), ("theta0", theta0)]),
    )
}

/// `u'` of the one-dimensional Neumann problem on a Gauss–Legendre grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeumannSolution {
    pub theta: Vec<f64>,
    pub du: Vec<f64>,
    /// `(∫ |u'|² p dθ)^{1/2}`.
    pub weighted_norm: f64,
    /// `p u'` at the upper end, the flux the boundary velocity has to match.
    pub flux_hi: f64,
}

/// Solves `-(p u')' = ∂_x p̃` on `domain` with `p u' = flux_lo` at the lower end:
/// `p(θ) u'(θ) = flux_lo - ∫_lo^θ ∂_x p̃`.
pub fn neumann_solve_1d(
    density: Density,
    dx_density: Density,
    domain: Interval,
    flux_lo: f64,
) -> Result<NeumannSolution> {
    if !domain.is_bounded() {
        return Err(Error::InvalidInput("Neumann domain must be bounded".into()));
    }
    let gl = GaussLegendre::cached(ORDER);
    let width = domain.width() / PANELS as f64;
    let mut theta = Vec::with_capacity(PANELS * ORDER);
    let mut du = Vec::with_capacity(PANELS * ORDER);
    let mut norm_sq = 0.0;
    let mut cumulative = 0.0;
    for k in 0..PANELS {
        let left = domain.lo() + k as f64 * width;
        let right = left + width;
        for (t, w) in gl.mapped(left, right) {
            let p = density(t);
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::NonIntegrable(format!("density vanishes at θ = {t}")));
            }
            let partial = cumulative + gl.integrate(dx_density, left, t);
            let d = (flux_lo - partial) / p;
            norm_sq += w * p * d * d;
            theta.push(t);
            du.push(d);
        }
        cumulative += gl.integrate(dx_density, left, right);
    }
    let weighted_norm = norm_sq.sqrt();
    if !weighted_norm.is_finite() {
        return Err(Error::NonIntegrable("weighted norm of u' diverges".into()));
    }
    Ok(NeumannSolution { theta, du, weighted_norm, flux_hi: flux_lo - cumulative })
}

/// Pointwise `u'(θ)` by adaptive quadrature of the flux integral.
pub fn neumann_du(density: Density, dx_density: Density, domain: Interval, flux_lo: f64, theta: f64) -> Result<f64> {
    if !domain.contains(theta) {
        return Err(Error::InvalidInput(format!("θ = {theta} lies outside the domain")));
    }
    let partial = integral(dx_density, domain.lo(), theta)?;
    Ok((flux_lo - partial) / density(theta))
}

/// The Pareto Neumann problem at `x`: posterior `Q/Z` on `(1, x ∧ θ₀)`,
/// extension derivative `-Q(θ) Q(x)/Z²` and zero flux at `θ = 1`.
pub fn pareto_neumann(q: Density, x: f64, theta0: f64) -> Result<NeumannSolution> {
    let top = x.min(theta0);
    let domain = Interval::new(1.0, top)?;
    let big_q = |s: f64| s * q(s);
    let z = integral(big_q, 1.0, top)?;
    let density = |s: f64| big_q(s) / z;
    if x >= theta0 {
        return neumann_solve_1d(&density, &|_| 0.0, domain, 0.0);
    }
    let qx = big_q(x);
    neumann_solve_1d(&density, &|s| -big_q(s) * qx / (z * z), domain, 0.0)
}

/// Moving-domain bound specialised to the one-dimensional Pareto model:
/// `K(x) = ‖V_x‖_{W^{1,∞}} (1 + 𝒞(1 + 𝒥₂)) + 𝒞 𝒥₁` with `V_x(θ) = (θ-1)/(x-1)`.
///
/// `𝒞` is the Muckenhoupt bound of the posterior. For `x ≥ θ₀` the posterior
/// no longer moves and contributes zero.
pub fn maintrace_1d(q: PriorDensity, theta0: f64, x_box: (f64, f64), grid: usize) -> Result<LipschitzCertificate> {
    check_box(x_box)?;
    if !(x_box.0 > 1.0) {
        return Err(Error::InvalidInput("the velocity norm blows up at x = 1; the box must start above 1".into()));
    }
    let big_q = |s: f64| s * q(s);
    let parts = |x: f64| -> Result<[f64; 4]> {
        if x >= theta0 {
            return Ok([0.0; 4]);
        }
        let z = integral(big_q, 1.0, x)?;
        let owned = Arc::clone(&q);
        let post = Distribution1D::from_density(move |s| s * owned(s), Interval::new(1.0, x)?)?;
        let c = bound_muckenhoupt_1d(&post)?.bound.value;
        let j1 = big_q(x) / z;
        let j2sq = integral(
            |s| {
                let d = derivative_fd(big_q, s, None).unwrap_or(f64::NAN);
                d * d / big_q(s)
            },
            1.0,
            x,
        )? / z;
        let velocity = 1.0 + 1.0 / (x - 1.0);
        Ok([velocity, c, j1, j2sq.sqrt()])
    };
    let k_of = |[v, c, j1, j2]: [f64; 4]| v * (1.0 + c * (1.0 + j2)) + c * j1;
    let (xmax, k) = grid_max_refine(|x| parts(x).map(k_of), x_box.0, x_box.1, grid)?;
    let [v, c, j1, j2] = parts(xmax)?;
    let mut domain = SupDomain::new(vec![x_box], grid);
    domain.argmax = Some(xmax);
    LipschitzCertificate::new(
        k,
        Route::Maintrace1d,
        domain,
        components([("K", k), ("velocity_w1inf", v), ("C", c), ("J1", j1), ("J2", j2)]),
    )
}
