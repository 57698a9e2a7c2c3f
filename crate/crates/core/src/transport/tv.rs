use crate::error::Result;
use crate::measures::Distribution1D;
use crate::numerics::{integrate_split, Interval, QuadratureSpec};

/// `½ ∫ |p_μ - p_ν|`, split at every support and window endpoint of both measures.
pub fn tv_distance(mu: &Distribution1D, nu: &Distribution1D) -> Result<f64> {
    let (a0, a1) = mu.window();
    let (b0, b1) = nu.window();
    let lo = a0.min(b0);
    let hi = a1.max(b1);
    let breaks = [a0, a1, b0, b1, mu.support().lo(), mu.support().hi(), nu.support().lo(), nu.support().hi()];
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-10).with_max_subdivisions(2000);
    let r = integrate_split(|x| (mu.pdf(x) - nu.pdf(x)).abs(), Interval::new(lo, hi)?, &breaks, &spec)?;
    Ok((0.5 * r.value).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_zero() {
        let d = Distribution1D::normal(0.5, 2.0).unwrap();
        assert_eq!(tv_distance(&d, &d).unwrap(), 0.0);
    }

    #[test]
    fn shifted_uniforms() {
        let a = Distribution1D::uniform(0.0, 1.0).unwrap();
        let b = Distribution1D::uniform(0.5, 1.5).unwrap();
        assert!((tv_distance(&a, &b).unwrap() - 0.5).abs() < 1e-8);
    }

    #[test]
    fn disjoint_uniforms() {
        let a = Distribution1D::uniform(0.0, 1.0).unwrap();
        let b = Distribution1D::uniform(2.0, 3.0).unwrap();
        assert!((tv_distance(&a, &b).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normals_closed_form() {
        // TV(N(0,1), N(d,1)) = 2Φ(d/2) - 1
        let a = Distribution1D::normal(0.0, 1.0).unwrap();
        let b = Distribution1D::normal(1.0, 1.0).unwrap();
        let half = Distribution1D::normal(0.0, 1.0).unwrap().cdf(0.5);
        assert!((tv_distance(&a, &b).unwrap() - (2.0 * half - 1.0)).abs() < 1e-9);
    }
}
