use serde::{Deserialize, Serialize};

use super::fisher::ScoreMoments;
use super::{check_box, components, LipschitzCertificate, Route, SupDomain};
use crate::error::{Error, Result};
use crate::measures::Distribution1D;
use crate::models::PosteriorKernel;
use crate::numerics::{grid_max_refine, integrate, second_derivative_fd, Interval, QuadratureSpec};
use crate::poincare::{
    bound_bakry_emery, bound_bobkov, bound_log_concave_diam, bound_muckenhoupt_1d, bound_payne_weinberger,
    Criterion, PoincareBound,
};

/// Which form of the `W2` bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum W2Variant {
    /// `𝒞[g π] · 𝒥_π[g]`.
    #[default]
    PoincareFisher,
    /// `𝒞[g π]² · (∫ |∇_θ Ψ|² g dπ)^{1/2}`.
    MixedScore,
}

fn scalar_data(kernel: &PosteriorKernel) -> Result<()> {
    if kernel.model().data_dim() != 1 {
        return Err(Error::InvalidInput(format!(
            "grid suprema need one-dimensional data; {} has {} coordinates",
            kernel.model().name(),
            kernel.model().data_dim()
        )));
    }
    Ok(())
}

fn sup<F>(f: F, x_box: (f64, f64), grid: usize) -> Result<(SupDomain, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_box(x_box)?;
    let (xmax, fmax) = grid_max_refine(f, x_box.0, x_box.1, grid)?;
    let mut domain = SupDomain::new(vec![x_box], grid);
    domain.argmax = Some(xmax);
    Ok((domain, fmax))
}

/// Total variation: `L = ½ sup_x ∫ |∇_x g| dπ = ½ sup_x E_post |Ψ|`.
pub fn lipschitz_tv(kernel: &PosteriorKernel, x_box: (f64, f64), grid: usize) -> Result<LipschitzCertificate> {
    scalar_data(kernel)?;
    let (domain, k) = sup(|x| Ok(ScoreMoments::compute(kernel, &[x])?.abs_moment(1.0)), x_box, grid)?;
    LipschitzCertificate::new(0.5 * k, Route::TvScore, domain, components([("K", k)]))
}

/// `W1`: `L = π(Θ)^{1/q} 𝒞_q[π] sup_x ‖∇_x g‖_{L^p_π}` with `1/p + 1/q = 1`.
///
/// Priors here are probability measures, so `π(Θ) = 1`.
pub fn lipschitz_w1(
    kernel: &PosteriorKernel,
    prior_poincare: &PoincareBound,
    p: f64,
    x_box: (f64, f64),
    grid: usize,
) -> Result<LipschitzCertificate> {
    scalar_data(kernel)?;
    if !(p > 1.0) {
        return Err(Error::InvalidInput(format!("exponent p must exceed 1, got {p}")));
    }
    let q = p / (p - 1.0);
    if (q - prior_poincare.order_q).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "prior Poincaré bound has order {}, conjugate of p = {p} is {q}",
            prior_poincare.order_q
        )));
    }
    let (domain, norm) = sup(|x| Ok(ScoreMoments::compute(kernel, &[x])?.grad_g_norm(p)), x_box, grid)?;
    let c = prior_poincare.value;
    LipschitzCertificate::new(
        c * norm,
        Route::W1Score,
        domain,
        components([("C_q", c), ("p", p), ("prior_mass", 1.0), ("sup_grad_g", norm)]),
    )
}

/// Smallest `-(ln p)''` over the posterior's mass window.
pub(crate) fn posterior_curvature(post: &Distribution1D) -> Result<f64> {
    let (lo, hi) = post.window();
    let support = post.support();
    let mut alpha = f64::INFINITY;
    for i in 1..128 {
        let t = lo + (hi - lo) * i as f64 / 128.0;
        if !support.contains(t) {
            continue;
        }
        let h = 1e-4 * (hi - lo);
        alpha = alpha.min(-second_derivative_fd(|s| post.log_pdf(s), t, Some(h))?);
    }
    Ok(alpha)
}

/// Poincaré constant bound for a one-dimensional posterior under `criterion`.
///
/// Bakry–Émery uses the smallest finite-difference curvature on the mass
/// window; the diameter bounds require a bounded, log-concave support.
pub fn posterior_poincare(post: &Distribution1D, criterion: Criterion) -> Result<f64> {
    let bound = match criterion {
        Criterion::BakryEmery => bound_bakry_emery(posterior_curvature(post)?)?,
        Criterion::Muckenhoupt1d => return Ok(bound_muckenhoupt_1d(post)?.bound.value),
        Criterion::Bobkov => bound_bobkov(post.variance(), 1)?,
        Criterion::LogConcaveDiam | Criterion::PayneWeinberger => {
            let support = post.support();
            if !support.is_bounded() {
                return Err(Error::InvalidInput(format!("{criterion} needs a bounded support")));
            }
            let alpha = posterior_curvature(post)?;
            if alpha < -1e-6 {
                return Err(Error::InvalidCurvature(alpha));
            }
            if criterion == Criterion::LogConcaveDiam {
                bound_log_concave_diam(support.width())?
            } else {
                bound_payne_weinberger(support.width())?
            }
        }
        other => return Err(Error::InvalidInput(format!("{other} is not available for posteriors"))),
    };
    Ok(bound.value)
}

/// `W2`: `L = sup_x 𝒞[g(x,·)π] 𝒥_π[g(x,·)]`, or the squared-constant form.
pub fn lipschitz_w2(
    kernel: &PosteriorKernel,
    criterion: Criterion,
    variant: W2Variant,
    x_box: (f64, f64),
    grid: usize,
) -> Result<LipschitzCertificate> {
    scalar_data(kernel)?;
    if kernel.model().has_moving_support() {
        return Err(Error::ZeroDensity);
    }
    let model = kernel.model();
    let eval = |x: f64| -> Result<(f64, f64)> {
        let post = kernel.posterior(&[x])?;
        let c = posterior_poincare(&post, criterion)?;
        let factor = match variant {
            W2Variant::PoincareFisher => ScoreMoments::with_posterior(kernel, &[x], &post)?.abs_moment(2.0).sqrt(),
            W2Variant::MixedScore => {
                let mut acc = 0.0;
                for (t, m) in post.nodes() {
                    if m > 0.0 {
                        let d = model.mixed_derivative(&[x], t)?;
                        acc += m * d.iter().map(|v| v * v).sum::<f64>();
                    }
                }
                acc.sqrt()
            }
        };
        Ok((c, factor))
    };
    let (domain, k) = sup(
        |x| {
            let (c, f) = eval(x)?;
            Ok(match variant {
                W2Variant::PoincareFisher => c * f,
                W2Variant::MixedScore => c * c * f,
            })
        },
        x_box,
        grid,
    )?;
    let (c, f) = eval(domain.argmax.unwrap_or(x_box.0))?;
    let (route, fkey) = match variant {
        W2Variant::PoincareFisher => (Route::W2Fisher, "J"),
        W2Variant::MixedScore => (Route::MixedScore, "grad_theta_psi"),
    };
    LipschitzCertificate::new(k, route, domain, components([("K", k), ("C_at_argmax", c), (fkey, f)]))
}

/// `W2` for a flat prior on a bounded interval:
/// `K = S_p sup_x ‖1/g‖^{1/2}_{L^{p/(2-p)}(Θ)} ‖∇_x g‖_{L^1(Θ)}`.
///
/// With one parameter `p ≥ d`, so the Sobolev conjugate `p*` is infinite and
/// the gradient is measured in `L^{p*/(p*-1)} = L^1`.
pub fn lipschitz_w2_sobolev(
    kernel: &PosteriorKernel,
    s_p: f64,
    p: f64,
    x_box: (f64, f64),
    grid: usize,
) -> Result<LipschitzCertificate> {
    scalar_data(kernel)?;
    if !(1.0..2.0).contains(&p) {
        return Err(Error::InvalidInput(format!("Sobolev exponent must satisfy 1 <= p < 2, got {p}")));
    }
    if !(s_p > 0.0) || !s_p.is_finite() {
        return Err(Error::InvalidInput(format!("S_p must be positive, got {s_p}")));
    }
    let prior = kernel.prior();
    let theta = prior.support();
    if !prior.is_flat() || !theta.is_bounded() {
        return Err(Error::InvalidInput("the Sobolev route needs a flat prior on a bounded interval".into()));
    }
    let s = p / (2.0 - p);
    let spec = QuadratureSpec::default().with_tolerances(1e-300, 1e-9).with_max_subdivisions(400);
    let inv_g_norm = |post: &Distribution1D| -> Result<f64> {
        let mode = post.median();
        let lhs = integrate(|t| (-s * post.log_pdf(t)).exp(), Interval::new(theta.lo(), mode)?, &spec);
        let rhs = integrate(|t| (-s * post.log_pdf(t)).exp(), Interval::new(mode, theta.hi())?, &spec);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if (a.value + b.value).is_finite() => Ok((a.value + b.value).powf(1.0 / s)),
            _ => Err(Error::NonConvergent("‖1/g‖ diverges".into())),
        }
    };
    let eval = |x: f64| -> Result<(f64, f64)> {
        let post = kernel.posterior(&[x])?;
        let grad = ScoreMoments::with_posterior(kernel, &[x], &post)?.abs_moment(1.0);
        Ok((inv_g_norm(&post)?, grad))
    };
    let (domain, k) = sup(
        |x| {
            let (ig, gr) = eval(x)?;
            Ok(s_p * ig.sqrt() * gr)
        },
        x_box,
        grid,
    )?;
    let (ig, gr) = eval(domain.argmax.unwrap_or(x_box.0))?;
    LipschitzCertificate::new(
        k,
        Route::W2Sobolev,
        domain,
        components([("K", k), ("S_p", s_p), ("p", p), ("inv_g_norm", ig), ("grad_g_l1", gr)]),
    )
}
