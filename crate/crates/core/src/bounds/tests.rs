use std::f64::consts::PI;
use std::sync::Arc;

use super::*;
use crate::models::{ExpFamilyModel, ExpFamilyParts, Model1D, ParetoModel, PosteriorKernel, Prior};
use crate::numerics::{integrate, Interval, QuadratureSpec};
use crate::poincare::{bound_bakry_emery, Criterion};
use crate::transport::wasserstein_1d;

fn gaussian_kernel() -> PosteriorKernel {
    PosteriorKernel::new(Arc::new(ExpFamilyModel::gaussian(1.0).unwrap()), Prior::normal(0.0, 1.0).unwrap())
}

fn flat_kernel() -> PosteriorKernel {
    let parts = ExpFamilyParts {
        name: "flat".into(),
        data_box: vec![(-1.0, 1.0)],
        t: Arc::new(|_| 0.0),
        grad_t: Arc::new(|_| vec![0.0]),
        lip_t: 0.0,
        log_h: Arc::new(|_| 0.0),
        m: Arc::new(|_| 0.0),
        dm: Arc::new(|_| 0.0),
        d2m: Arc::new(|_| 0.0),
        theta: Interval::real_line(),
    };
    PosteriorKernel::new(Arc::new(ExpFamilyModel::custom(parts).unwrap()), Prior::normal(0.0, 1.0).unwrap())
}

fn pareto_kernel() -> PosteriorKernel {
    PosteriorKernel::new(Arc::new(ParetoModel::new(2.0).unwrap()), Prior::uniform(1.0, 2.0).unwrap())
}

#[test]
fn fisher_gaussian_is_posterior_sd() {
    let k = gaussian_kernel();
    for x in [-2.0, 0.0, 1.5] {
        assert!((fisher_j(&k, &[x]).unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
        assert!(null_mean(&k, &[x]).unwrap() < 1e-8);
    }
    assert_eq!(fisher_j(&flat_kernel(), &[0.3]).unwrap(), 0.0);
}

#[test]
fn fisher_matches_finite_difference_of_posterior() {
    // ∂_x ln p(θ|x) by central differences of whole posteriors.
    let prior = Prior::normal(0.5, 0.7).unwrap();
    let models: Vec<Arc<dyn Model1D>> =
        vec![Arc::new(ExpFamilyModel::gaussian(1.3).unwrap()), Arc::new(ExpFamilyModel::exponential_rate())];
    let priors = [prior, Prior::truncated_exponential(1.0, 0.1, 6.0).unwrap()];
    for (model, prior) in models.into_iter().zip(priors) {
        let k = PosteriorKernel::new(model, prior);
        let x = 0.9;
        let h = 1e-4;
        let (lo, hi) = (k.posterior(&[x - h]).unwrap(), k.posterior(&[x + h]).unwrap());
        let post = k.posterior(&[x]).unwrap();
        let fd: f64 = post
            .nodes()
            .filter(|(_, m)| *m > 0.0)
            .map(|(t, m)| {
                let d = (hi.log_pdf(t) - lo.log_pdf(t)) / (2.0 * h);
                m * d * d
            })
            .sum::<f64>()
            .sqrt();
        let j = fisher_j(&k, &[x]).unwrap();
        assert!((j - fd).abs() <= 1e-4 * fd, "{} vs {}", j, fd);
    }
}

#[test]
fn fisher_values_on_gaussian() {
    let v = fisher_values(&gaussian_kernel(), &[0.4]).unwrap();
    assert!((v.j_pi - 0.5f64.sqrt()).abs() < 1e-6);
    assert_eq!(v.j1, v.j_pi);
    // Location Fisher information of N(m, 1/2) is 2.
    assert!((v.j2 - 2f64.sqrt()).abs() < 1e-5);
}

#[test]
fn moving_support_routes_to_zero_density() {
    let k = pareto_kernel();
    assert!(matches!(fisher_j(&k, &[1.5]), Err(crate::Error::ZeroDensity)));
    let r = lipschitz_w2(&k, Criterion::Muckenhoupt1d, W2Variant::PoincareFisher, (1.1, 2.5), 16);
    assert!(matches!(r, Err(crate::Error::ZeroDensity)));
}

#[test]
fn tv_gaussian_half_normal_mean() {
    let cert = lipschitz_tv(&gaussian_kernel(), (-3.0, 3.0), 32).unwrap();
    assert_eq!(cert.metric, Metric::Tv);
    assert!((cert.l - 0.5 / PI.sqrt()).abs() < 1e-6, "{}", cert.l);
    assert_eq!(lipschitz_tv(&flat_kernel(), (-1.0, 1.0), 8).unwrap().l, 0.0);
}

#[test]
fn w1_gaussian_matches_direct_quadrature() {
    let prior_bound = bound_bakry_emery(1.0).unwrap();
    let cert = lipschitz_w1(&gaussian_kernel(), &prior_bound, 2.0, (-3.0, 3.0), 32).unwrap();
    // The norm grows with |x|, so the supremum sits on the box edge.
    let x: f64 = 3.0;
    let g = |t: f64| 2f64.sqrt() * (-(t - x / 2.0).powi(2) + 0.5 * t * t).exp();
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
    let spec = QuadratureSpec::default().with_tolerances(1e-14, 1e-12);
    let oracle = integrate(|t| (g(t) * (t - x / 2.0)).powi(2) * phi(t), Interval::real_line(), &spec)
        .unwrap()
        .value
        .sqrt();
    assert!((cert.l - oracle).abs() < 1e-6 * oracle, "{} vs {}", cert.l, oracle);
    assert!(lipschitz_w1(&gaussian_kernel(), &prior_bound, 3.0, (-1.0, 1.0), 8).is_err());
    assert_eq!(lipschitz_w1(&flat_kernel(), &prior_bound, 2.0, (-1.0, 1.0), 8).unwrap().l, 0.0);
}

#[test]
fn w2_gaussian_bakry_emery_and_mixed_score() {
    let k = gaussian_kernel();
    let cert = lipschitz_w2(&k, Criterion::BakryEmery, W2Variant::PoincareFisher, (-3.0, 3.0), 16).unwrap();
    assert_eq!(cert.route, Route::W2Fisher);
    assert!((cert.l - 0.5).abs() < 1e-5, "{}", cert.l);
    let cor = lipschitz_w2(&k, Criterion::BakryEmery, W2Variant::MixedScore, (-3.0, 3.0), 16).unwrap();
    assert_eq!(cor.route, Route::MixedScore);
    assert!((cor.l - 0.5).abs() < 1e-5);
    let expfam = lipschitz_expfam(&ExpFamilyModel::gaussian(1.0).unwrap(), &Prior::normal(0.0, 1.0).unwrap()).unwrap();
    assert!(cert.l >= expfam.l - 1e-6);
    let flat = lipschitz_w2(&flat_kernel(), Criterion::Bobkov, W2Variant::PoincareFisher, (-1.0, 1.0), 8).unwrap();
    assert_eq!(flat.l, 0.0);
}

#[test]
fn sobolev_route_is_finite_and_sound() {
    let k = PosteriorKernel::new(Arc::new(ExpFamilyModel::gaussian(1.0).unwrap()), Prior::uniform(-5.0, 5.0).unwrap());
    let cert = lipschitz_w2_sobolev(&k, 1.0, 1.0, (-3.0, 3.0), 16).unwrap();
    assert_eq!(cert.route, Route::W2Sobolev);
    assert!(cert.l.is_finite() && cert.l > 0.0);
    // ‖1/g‖_{L¹} ≥ |Θ|² / ∫ g = |Θ|² by Cauchy–Schwarz.
    assert!(cert.component("inv_g_norm").unwrap() >= 100.0);
    for (a, b) in [(-3.0, -2.5), (0.0, 0.1), (2.0, 3.0)] {
        let w = wasserstein_1d(&k.posterior(&[a]).unwrap(), &k.posterior(&[b]).unwrap(), 2.0).unwrap();
        assert!(w <= cert.l * (b - a));
    }
    assert!(lipschitz_w2_sobolev(&gaussian_kernel(), 1.0, 1.0, (-1.0, 1.0), 8).is_err());
    assert!(lipschitz_w2_sobolev(&k, 1.0, 2.0, (-1.0, 1.0), 8).is_err());
}

#[test]
fn expfam_and_exchangeable_constants() {
    let model = ExpFamilyModel::gaussian(1.0).unwrap();
    let prior = Prior::normal(0.0, 1.0).unwrap();
    let one = lipschitz_expfam(&model, &prior).unwrap();
    assert_eq!(one.l, 0.5);
    assert_eq!(lipschitz_exch_n(&model, &prior, 1).unwrap().l, one.l);
    assert_eq!(lipschitz_exch_n(&model, &prior, 3).unwrap().l, 0.75);
    let mut last = 0.0;
    for n in [1, 2, 10, 100, 10_000] {
        let l = lipschitz_exch_n(&model, &prior, n).unwrap().l;
        assert!(l > last && l < 1.0);
        last = l;
    }
    // σ = 2 scales T by 1/4 and M'' by 1/4.
    let wide = ExpFamilyModel::gaussian(2.0).unwrap();
    assert!((lipschitz_expfam(&wide, &prior).unwrap().l - 0.25 / 1.25).abs() < 1e-15);
    let concave = Prior::custom("concave", |t| -0.1 * t * t, Interval::real_line(), Some(-2.0)).unwrap();
    assert!(matches!(lipschitz_exch_n(&model, &concave, 1), Err(crate::Error::ThresholdViolation(_))));
    assert!(matches!(lipschitz_expfam(&model, &concave), Err(crate::Error::CurvatureNonPositive(_))));
}

#[test]
fn bobkov_fallback_uses_variance() {
    let model = Arc::new(ExpFamilyModel::gaussian(1.0).unwrap());
    let cert = lipschitz_expfam_bobkov(model, &Prior::normal(0.0, 1.0).unwrap(), (-1.0, 1.0), 8).unwrap();
    assert!((cert.l - 12.0 * 3f64.sqrt() * 0.5).abs() < 1e-6);
    let rate = Arc::new(ExpFamilyModel::exponential_rate());
    assert!(lipschitz_expfam_bobkov(rate, &Prior::uniform(0.5, 2.0).unwrap(), (0.1, 1.0), 8).is_err());
}

fn uniform_q(_: f64) -> f64 {
    1.0
}

#[test]
fn pareto_cq_closed_form() {
    let expected = 2.0 * (1.5f64).powf(-0.5) * 2f64.ln().sqrt();
    assert!((pareto_cq(&uniform_q, 2.0).unwrap() - expected).abs() < 1e-12);
    let cert = lipschitz_pareto(&ParetoVariant::OneD, &uniform_q, 2.0, (1.0, 3.0), 128).unwrap();
    assert!((cert.l - expected).abs() < 1e-9, "{}", cert.l);
    assert!((cert.sup_domain.argmax.unwrap() - 2.0).abs() < 1e-3);
    // Near the lower end both integrals are linear and C_Q → Q(1) = 1.
    assert!((pareto_cq(&uniform_q, 1.0 + 1e-7).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn pareto_msample_prefactor() {
    let one = lipschitz_pareto(&ParetoVariant::OneD, &uniform_q, 2.0, (1.0, 3.0), 64).unwrap();
    let four = lipschitz_pareto(&ParetoVariant::MSample { m: 4 }, &uniform_q, 2.0, (1.0, 3.0), 64).unwrap();
    assert_eq!(four.route, Route::ParetoMsample);
    assert!((four.l - 2.0 * one.l).abs() < 1e-12);
}

#[test]
fn pareto_rejects_non_integrable_reciprocal() {
    let q = |t: f64| t - 1.0;
    assert!(pareto_cq(&q, 1.5).is_err());
}

fn priors() -> Vec<Box<dyn Fn(f64) -> f64 + Sync>> {
    vec![
        Box::new(|_| 1.0),
        Box::new(|t| t),
        Box::new(|t| 1.0 / t),
        Box::new(|t: f64| (-t).exp()),
        Box::new(|t| 3.0 - t),
    ]
}

#[test]
fn neumann_matches_explicit_formula() {
    for q in priors() {
        let big_q = |s: f64| s * q(s);
        let x = 1.5;
        let z = integrate(&big_q, Interval::new(1.0, x).unwrap(), &QuadratureSpec::default()).unwrap().value;
        let formula = |t: f64| {
            let inner = integrate(&big_q, Interval::new(1.0, t).unwrap(), &QuadratureSpec::default()).unwrap().value;
            big_q(x) * inner / (big_q(t) * z)
        };
        let density = |s: f64| big_q(s) / z;
        let dx = |s: f64| -big_q(s) * big_q(x) / (z * z);
        let domain = Interval::new(1.0, x).unwrap();
        for i in 1..=50 {
            let t = 1.0 + 0.5 * i as f64 / 51.0;
            let du = neumann_du(&density, &dx, domain, 0.0, t).unwrap();
            assert!((du - formula(t)).abs() < 1e-8, "t={t}: {du} vs {}", formula(t));
        }
        let sol = pareto_neumann(&*q, x, 2.0).unwrap();
        for (t, du) in sol.theta.iter().zip(&sol.du).step_by(37) {
            assert!((du - formula(*t)).abs() < 1e-8);
        }
        // The flux reaching the moving end equals the boundary velocity times the density.
        assert!((sol.flux_hi - density(x)).abs() < 1e-10);
    }
}

#[test]
fn neumann_norm_below_cq() {
    for q in priors() {
        for i in 1..=10 {
            let x = 1.0 + 0.1 * i as f64;
            let sol = pareto_neumann(&*q, x, 3.0).unwrap();
            let cq = pareto_cq(&*q, x).unwrap();
            assert!(sol.weighted_norm <= cq * (1.0 + 1e-6), "x={x}: {} > {cq}", sol.weighted_norm);
        }
    }
}

#[test]
fn neumann_zero_forcing_gives_zero() {
    let sol = neumann_solve_1d(&|_| 1.0, &|_| 0.0, Interval::new(0.0, 1.0).unwrap(), 0.0).unwrap();
    assert!(sol.du.iter().all(|d| *d == 0.0));
    assert_eq!(sol.weighted_norm, 0.0);
}

#[test]
fn maintrace_is_finite_and_dominates_cq() {
    let q: PriorDensity = Arc::new(|_| 1.0);
    let cert = maintrace_1d(q, 2.0, (1.1, 3.0), 32).unwrap();
    assert_eq!(cert.route, Route::Maintrace1d);
    assert!(cert.l.is_finite());
    let cq = lipschitz_pareto(&ParetoVariant::OneD, &uniform_q, 2.0, (1.1, 3.0), 32).unwrap();
    assert!(cert.l >= cq.l);
    assert!(maintrace_1d(Arc::new(|_| 1.0), 2.0, (1.0, 3.0), 8).is_err());
}

#[test]
fn certificate_serialises_with_route_tags() {
    let cert = lipschitz_expfam(&ExpFamilyModel::gaussian(1.0).unwrap(), &Prior::normal(0.0, 1.0).unwrap()).unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    assert!(json.contains(r#""L":0.5"#) && json.contains(r#""route":"expfam""#) && json.contains(r#""metric":"w2""#));
    let back: LipschitzCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
    assert_eq!(Route::TvScore.metric(), Metric::Tv);
    assert_eq!(Route::W1Score.metric(), Metric::W1);
    assert!(LipschitzCertificate::new(f64::INFINITY, Route::MixedScore, SupDomain::closed_form(), Default::default()).is_err());
}

#[test]
fn poincare_audit_is_sound_on_reference_laws() {
    use crate::measures::Distribution1D;
    use crate::poincare::Criterion;
    let laws = [
        Distribution1D::normal(0.0, 1.0).unwrap(),
        Distribution1D::uniform(0.0, 1.0).unwrap(),
        Distribution1D::truncated_exponential(1.0, 0.0, 1.0).unwrap(),
    ];
    for d in &laws {
        let audit = poincare_audit(d, 2000).unwrap();
        assert!(audit.violations(1e-3).is_empty(), "{audit:?}");
    }
    let g = poincare_audit(&laws[0], 2000).unwrap();
    assert!((g.value(Criterion::BakryEmery).unwrap() - g.oracle).abs() < 1e-3, "{g:?}");
    assert!((g.oracle - 1.0).abs() < 1e-3);
    let u = poincare_audit(&laws[1], 2000).unwrap();
    assert!((u.oracle - 1.0 / std::f64::consts::PI).abs() < 1e-4);
    assert!(u.value(Criterion::BakryEmery).is_none());
}
