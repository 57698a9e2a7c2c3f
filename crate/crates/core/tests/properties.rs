//! Property tests for the invariants of each layer, driven through the public API.

use std::sync::Arc;

use proptest::prelude::*;
use wellposed::bounds::{lipschitz_expfam, lipschitz_tv, lipschitz_w2, W2Variant};
use wellposed::experiments::{mixture_posterior, ols, ratio_sweep};
use wellposed::measures::{Distribution1D, EmpiricalMeasure, WeightedPoints};
use wellposed::models::{ExpFamilyModel, Model1D, ParetoModel, PosteriorKernel, Prior};
use wellposed::numerics::{gradient_fd, integrate, poincare_constant_1d_numeric, Interval, QuadratureSpec};
use wellposed::poincare::{
    bound_bakry_emery, bound_francesi, bound_holley_stroock, FnPotential, FrancesiParams, FrancesiVariant,
    ZeroPotential,
};
use wellposed::transport::{ot_discrete, wasserstein_1d, OtMode};

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn poly_d(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a * x.powi(k as i32 - 1)).sum()
}

fn atoms(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-4.0..4.0f64, 0.05..1.0f64), 1..=max)
}

fn empirical(a: &[(f64, f64)]) -> EmpiricalMeasure {
    EmpiricalMeasure::normalized(a.to_vec()).unwrap()
}

fn gaussian_kernel() -> PosteriorKernel {
    PosteriorKernel::new(Arc::new(ExpFamilyModel::gaussian(1.0).unwrap()), Prior::normal(0.0, 1.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integration_is_linear(
        f in prop::collection::vec(-3.0..3.0f64, 1..6),
        g in prop::collection::vec(-3.0..3.0f64, 1..6),
        a in -2.0..2.0f64,
        b in -2.0..2.0f64,
    ) {
        let spec = QuadratureSpec::default();
        let unit = Interval::new(0.0, 1.0).unwrap();
        let i_f = integrate(|x| poly(&f, x), unit, &spec).unwrap();
        let i_g = integrate(|x| poly(&g, x), unit, &spec).unwrap();
        let i_fg = integrate(|x| a * poly(&f, x) + b * poly(&g, x), unit, &spec).unwrap();
        let tol = 1e-10 + a.abs() * i_f.error + b.abs() * i_g.error + i_fg.error;
        prop_assert!((i_fg.value - (a * i_f.value + b * i_g.value)).abs() <= tol);
    }

    #[test]
    fn fd_gradient_matches_polynomial(c in prop::collection::vec(-2.0..2.0f64, 1..=5), x in -1.5..1.5f64) {
        let g = gradient_fd(|y: &[f64]| poly(&c, y[0]), &[x], None).unwrap();
        prop_assert!((g[0] - poly_d(&c, x)).abs() <= 1e-6);
    }

    #[test]
    fn normal_quantile_inverts_cdf(mean in -5.0..5.0f64, sd in 0.2..4.0f64, u in 0.01..0.99f64) {
        let d = Distribution1D::normal(mean, sd).unwrap();
        let x = d.quantile(u);
        prop_assert!((d.cdf(x) - u).abs() <= 1e-6);
        prop_assert!((d.quantile(d.cdf(x)) - x).abs() <= 1e-6 * sd.max(1.0));
    }

    #[test]
    fn quantile_wasserstein_equals_lp(a in atoms(8), b in atoms(8), p in prop::sample::select(vec![1.0, 2.0, 3.0])) {
        let (ma, mb) = (empirical(&a), empirical(&b));
        let q = wasserstein_1d(&ma, &mb, p).unwrap();
        let lp = ot_discrete(&WeightedPoints::from(&ma), &WeightedPoints::from(&mb), p, OtMode::Exact).unwrap().cost;
        prop_assert!((q - lp).abs() <= 1e-9, "{q} vs {lp}");
    }

    #[test]
    fn wasserstein_is_a_metric(a in atoms(6), b in atoms(6), c in atoms(6), p in prop::sample::select(vec![1.0, 2.0])) {
        let (ma, mb, mc) = (empirical(&a), empirical(&b), empirical(&c));
        let ab = wasserstein_1d(&ma, &mb, p).unwrap();
        let ba = wasserstein_1d(&mb, &ma, p).unwrap();
        let bc = wasserstein_1d(&mb, &mc, p).unwrap();
        let ac = wasserstein_1d(&ma, &mc, p).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ac <= ab + bc + 1e-8);
        prop_assert!(wasserstein_1d(&ma, &ma, p).unwrap() <= 1e-12);
    }

    #[test]
    fn wasserstein_scales_under_dilation(a in atoms(6), b in atoms(6), c in -3.0..3.0f64) {
        prop_assume!(c.abs() > 1e-3);
        let scale = |v: &[(f64, f64)]| empirical(&v.iter().map(|&(x, w)| (c * x, w)).collect::<Vec<_>>());
        for p in [1.0, 2.0] {
            let base = wasserstein_1d(&empirical(&a), &empirical(&b), p).unwrap();
            let dil = wasserstein_1d(&scale(&a), &scale(&b), p).unwrap();
            prop_assert!((dil - c.abs() * base).abs() <= 1e-8);
        }
    }

    #[test]
    fn holley_stroock_without_oscillation_is_identity(alpha in 0.1..10.0f64) {
        let base = bound_bakry_emery(alpha).unwrap();
        prop_assert_eq!(bound_holley_stroock(&base, 0.0).unwrap().value, base.value);
    }

    #[test]
    fn conjugate_posterior_moments(xs in prop::collection::vec(-3.0..3.0f64, 1..=5)) {
        let kernel = gaussian_kernel();
        let data: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let post = kernel.posterior_n(&data).unwrap();
        let n = xs.len() as f64;
        let sum: f64 = xs.iter().sum();
        prop_assert!((post.mean() - sum / (n + 1.0)).abs() <= 1e-8);
        prop_assert!((post.variance() - 1.0 / (n + 1.0)).abs() <= 1e-8);
    }

    #[test]
    fn pareto_support_ends_at_min_of_data_and_truncation(x in 1.05..3.0f64, theta0 in 1.2..2.0f64) {
        let model: Arc<dyn Model1D> = Arc::new(ParetoModel::new(theta0).unwrap());
        let kernel = PosteriorKernel::new(model, Prior::uniform(1.0, 2.0).unwrap());
        let post = kernel.posterior(&[x]).unwrap();
        prop_assert_eq!(post.support().hi(), x.min(theta0));
    }

    #[test]
    fn mixture_weights_are_a_probability_vector(m1 in -3.0..3.0f64, m2 in -3.0..3.0f64, l in 0.05..0.95f64, x in -3.0..3.0f64) {
        let comps = vec![(l, Prior::normal(m1, 1.0).unwrap()), (1.0 - l, Prior::normal(m2, 1.0).unwrap())];
        let model = Arc::new(ExpFamilyModel::gaussian(1.0).unwrap());
        let mix = mixture_posterior(&comps, model, &[x]).unwrap();
        prop_assert!((mix.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(mix.weights.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn least_squares_recovers_lines(slope in -3.0..3.0f64, icept in -3.0..3.0f64) {
        let xs = [0.5, 1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| icept + slope * x).collect();
        let (s, i) = ols(&xs, &ys).unwrap();
        prop_assert!((s - slope).abs() <= 1e-12 && (i - icept).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lebesgue_poincare_constant_scales_with_length(a in 0.5..3.0f64) {
        let c1 = poincare_constant_1d_numeric(|_| 1.0, Interval::new(0.0, a).unwrap(), 400).unwrap();
        let c2 = poincare_constant_1d_numeric(|_| 1.0, Interval::new(0.0, 2.0 * a).unwrap(), 400).unwrap();
        prop_assert!((c2 / c1 - 2.0).abs() <= 2e-3);
    }

    #[test]
    fn francesi_one_decreases_in_n(alpha in 0.5..3.0f64, h in -1.0..1.0f64) {
        let v = FnPotential::new(1, |x: &[f64]| 0.5 * x[0] * x[0]);
        let params = FrancesiParams { alpha, h, ..Default::default() };
        // n·C² ≤ 1/α + |h|/α² needs n ≥ 2 as well as n ≥ 2|h|/α.
        let start = ((2.0 * h.abs() / alpha).ceil() as u32).max(2);
        let mut prev = f64::INFINITY;
        for n in start..start + 6 {
            let b = bound_francesi(&v, &ZeroPotential(1), n, FrancesiVariant::One, &params).unwrap().value;
            prop_assert!(b < prev);
            prop_assert!(b * b * n as f64 <= 1.0 / alpha + h.abs() / (alpha * alpha) + 1e-12);
            prev = b;
        }
    }

    #[test]
    fn certified_routes_bound_random_pairs(seed in any::<u64>()) {
        let kernel = gaussian_kernel();
        let model = ExpFamilyModel::gaussian(1.0).unwrap();
        let certs = [
            lipschitz_expfam(&model, kernel.prior()).unwrap(),
            lipschitz_tv(&kernel, (-3.0, 3.0), 32).unwrap(),
            lipschitz_w2(&kernel, wellposed::poincare::Criterion::BakryEmery, W2Variant::PoincareFisher, (-3.0, 3.0), 32).unwrap(),
        ];
        for cert in &certs {
            let report = ratio_sweep(&kernel, cert, Some((-3.0, 3.0)), 20, seed).unwrap();
            prop_assert!(report.passed, "{}: {} vs {}", cert.route, report.max_ratio, cert.l);
            prop_assert!(report.pairs.iter().all(|p| p.ratio >= 0.0));
            let max = report.pairs.iter().map(|p| p.ratio).fold(0.0, f64::max);
            prop_assert_eq!(max, report.max_ratio);
        }
    }
}
