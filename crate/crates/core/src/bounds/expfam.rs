use std::sync::Arc;

use super::{check_box, components, LipschitzCertificate, Route, SupDomain};
use crate::error::{Error, Result};
use crate::models::{ExpFamilyModel, Model1D, PosteriorKernel, Prior};
use crate::numerics::grid_max_refine;

/// Points used to estimate `λ_*(W)` when the prior has no closed form.
const LAMBDA_GRID: usize = 256;

/// `L = Lip(T)/α` with `α = inf M'' + λ_*(W)`.
pub fn lipschitz_expfam(model: &ExpFamilyModel, prior: &Prior) -> Result<LipschitzCertificate> {
    let lambda = prior.lambda_w_or_estimate(LAMBDA_GRID)?;
    let alpha = model.hess_m_lower() + lambda;
    if !(alpha > 0.0) {
        return Err(Error::CurvatureNonPositive(alpha));
    }
    let l = model.lip_t() / alpha;
    LipschitzCertificate::new(
        l,
        Route::Expfam,
        SupDomain::closed_form(),
        components([("lip_T", model.lip_t()), ("hess_M_lower", model.hess_m_lower()), ("lambda_W", lambda), ("alpha", alpha)]),
    )
}

/// Fallback for `α = 0` on the whole line: `L = 12√3 Lip(T) sup_x Var_post`.
///
/// The variance enters to the first power: the Poincaré factor `12√3 σ` is
/// multiplied by the Fisher factor `Lip(T) σ`.
pub fn lipschitz_expfam_bobkov(
    model: Arc<ExpFamilyModel>,
    prior: &Prior,
    x_box: (f64, f64),
    grid: usize,
) -> Result<LipschitzCertificate> {
    check_box(x_box)?;
    let theta = model.param_space();
    if theta.lo().is_finite() || theta.hi().is_finite() {
        return Err(Error::InvalidInput("the variance fallback needs Θ to be the whole line".into()));
    }
    let lip_t = model.lip_t();
    let kernel = PosteriorKernel::new(model, prior.clone());
    let (xmax, var) = grid_max_refine(|x| Ok(kernel.posterior(&[x])?.variance()), x_box.0, x_box.1, grid)?;
    let l = 12.0 * 3f64.sqrt() * lip_t * var;
    let mut domain = SupDomain::new(vec![x_box], grid);
    domain.argmax = Some(xmax);
    LipschitzCertificate::new(
        l,
        Route::Expfam,
        domain,
        components([("lip_T", lip_t), ("sup_var_post", var), ("bobkov_fallback", 1.0)]),
    )
}

/// `n` exchangeable observations through the mean statistic `t_n`:
/// `L = n/(nα + λ_*(W))`, valid once `n ≥ max(1, -λ_*/α)`.
pub fn lipschitz_exch_n(model: &ExpFamilyModel, prior: &Prior, n: usize) -> Result<LipschitzCertificate> {
    let lambda = prior.lambda_w_or_estimate(LAMBDA_GRID)?;
    let alpha = model.hess_m_lower();
    let nf = n as f64;
    let threshold = if alpha > 0.0 { (-lambda / alpha).max(1.0) } else { 1.0 };
    if n == 0 || nf < threshold {
        return Err(Error::ThresholdViolation(format!("n = {n} is below max(1, -λ/α) = {threshold}")));
    }
    let denom = nf * alpha + lambda;
    if !(denom > 0.0) {
        return Err(Error::CurvatureNonPositive(denom));
    }
    LipschitzCertificate::new(
        nf / denom,
        Route::ExchN,
        SupDomain::closed_form(),
        components([("n", nf), ("alpha", alpha), ("lambda_W", lambda)]),
    )
}
