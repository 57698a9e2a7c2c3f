use std::sync::Arc;

use super::*;
use crate::transport::wasserstein_1d;

fn gaussian() -> Arc<dyn Model1D> {
    Arc::new(ExpFamilyModel::gaussian(1.0).unwrap())
}

#[test]
fn conjugate_normal_single_observation() {
    let prior = Prior::normal(0.0, 1.0).unwrap();
    for x in [-2.0, 0.0, 0.7, 3.0] {
        let post = posterior(gaussian(), &prior, &[x]).unwrap();
        assert!((post.mean() - x / 2.0).abs() < 1e-8, "x={x}");
        assert!((post.variance() - 0.5).abs() < 1e-8);
    }
}

#[test]
fn conjugate_normal_many_observations() {
    let prior = Prior::normal(0.0, 1.0).unwrap();
    let post = posterior_n(gaussian(), &prior, &[vec![1.0], vec![1.0]]).unwrap();
    assert!((post.mean() - 2.0 / 3.0).abs() < 1e-8);
    assert!((post.variance() - 1.0 / 3.0).abs() < 1e-8);
    for n in [1usize, 2, 5] {
        let x = 0.8;
        let xs = vec![vec![x]; n];
        let post = posterior_n(gaussian(), &prior, &xs).unwrap();
        let nf = n as f64;
        assert!((post.mean() - x * nf / (nf + 1.0)).abs() < 1e-8);
        assert!((post.variance() - 1.0 / (nf + 1.0)).abs() < 1e-8);
    }
}

#[test]
fn posterior_is_permutation_invariant() {
    let prior = Prior::normal(0.3, 2.0).unwrap();
    let a = posterior_n(gaussian(), &prior, &[vec![0.1], vec![-1.4], vec![2.2]]).unwrap();
    let b = posterior_n(gaussian(), &prior, &[vec![2.2], vec![0.1], vec![-1.4]]).unwrap();
    assert!((a.mean() - b.mean()).abs() < 1e-12);
    assert!(wasserstein_1d(&a, &b, 1.0).unwrap() < 1e-9);
}

#[test]
fn pareto_posterior_is_linear_on_truncated_support() {
    let model: Arc<dyn Model1D> = Arc::new(ParetoModel::new(f64::INFINITY).unwrap());
    let prior = Prior::uniform(1.0, 3.0).unwrap();
    let post = posterior(model, &prior, &[1.5]).unwrap();
    let w = post.support();
    assert!((w.lo() - 1.0).abs() < 1e-12 && (w.hi() - 1.5).abs() < 1e-12);
    // Density ∝ θ on (1, 1.5): normaliser (1.5² - 1)/2.
    for t in [1.1, 1.25, 1.45] {
        assert!((post.pdf(t) - t / 0.625).abs() < 1e-8, "t={t}");
    }
}

#[test]
fn pareto_support_endpoint_is_min_of_data_and_cap() {
    let prior = Prior::uniform(1.0, 3.0).unwrap();
    for (theta0, x, top) in [(2.0, 2.5, 2.0), (2.0, 1.4, 1.4)] {
        let model: Arc<dyn Model1D> = Arc::new(ParetoModel::new(theta0).unwrap());
        let post = posterior(model, &prior, &[x]).unwrap();
        assert!((post.support().hi() - top).abs() < 1e-12);
    }
    let model: Arc<dyn Model1D> = Arc::new(ParetoModel::new(2.0).unwrap());
    assert!(matches!(posterior(model, &prior, &[0.5]), Err(crate::Error::ZeroEvidence { .. })));
}

#[test]
fn flat_likelihood_returns_prior() {
    let parts = ExpFamilyParts {
        name: "flat".into(),
        data_box: vec![(0.0, 1.0)],
        t: Arc::new(|_| 0.0),
        grad_t: Arc::new(|_| vec![0.0]),
        lip_t: 0.0,
        log_h: Arc::new(|_| 0.0),
        m: Arc::new(|_| 0.0),
        dm: Arc::new(|_| 0.0),
        d2m: Arc::new(|_| 0.0),
        theta: crate::numerics::Interval::real_line(),
    };
    let model: Arc<dyn Model1D> = Arc::new(ExpFamilyModel::custom(parts).unwrap());
    let prior = Prior::normal(1.0, 0.5).unwrap();
    let post = posterior(model, &prior, &[0.4]).unwrap();
    assert!(wasserstein_1d(&post, prior.distribution(), 1.0).unwrap() < 1e-6);
}

#[test]
fn posterior_depends_only_on_sufficient_statistic() {
    // Two samples with equal sums give the same Gaussian-location posterior.
    let prior = Prior::normal(0.0, 1.0).unwrap();
    let a = posterior_n(gaussian(), &prior, &[vec![0.2], vec![1.0]]).unwrap();
    let b = posterior_n(gaussian(), &prior, &[vec![0.6], vec![0.6]]).unwrap();
    assert!(wasserstein_1d(&a, &b, 1.0).unwrap() <= 1e-6);
}

#[test]
fn registry_builds_and_normalises() {
    for name in MODEL_NAMES {
        let spec = ModelSpec::by_name(name).unwrap();
        let model = build_model(&spec).unwrap();
        assert_eq!(spec.registry_name(), name);
        if let Some(m) = model.as_model1d() {
            assert!(!m.name().is_empty());
        }
    }
    assert!(ModelSpec::by_name("nope").is_err());
    assert!(build_model(&ModelSpec::WienerJ { j: 1 }).is_err());
}

#[test]
fn model_spec_json_round_trip() {
    let spec: ModelSpec = serde_json::from_str(r#"{"name":"pareto_1d","theta0":2.0}"#).unwrap();
    assert_eq!(spec, ModelSpec::Pareto1d { theta0: Some(2.0) });
    assert!(serde_json::from_str::<ModelSpec>(r#"{"name":"pareto_1d","bogus":1}"#).is_err());
}

#[test]
fn exponential_rate_normalises() {
    let m = ExpFamilyModel::exponential_rate();
    check_normalization(&m, &[0.3, 1.0, 4.0]).unwrap();
    let p = ParetoModel::new(3.0).unwrap();
    check_normalization(&p, &[1.2, 2.9]).unwrap();
}
