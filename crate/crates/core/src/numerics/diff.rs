use crate::error::{check_finite, Result};

/// Default central-difference step at `x`.
pub fn default_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// Central-difference derivative of a scalar function.
pub fn derivative_fd<F: Fn(f64) -> f64>(f: F, x: f64, step: Option<f64>) -> Result<f64> {
    let h = step.unwrap_or_else(|| default_step(x));
    let fp = check_finite(x + h, f(x + h))?;
    let fm = check_finite(x - h, f(x - h))?;
    Ok((fp - fm) / (2.0 * h))
}

/// Central second difference.
pub fn second_derivative_fd<F: Fn(f64) -> f64>(f: F, x: f64, step: Option<f64>) -> Result<f64> {
    let h = step.unwrap_or_else(|| 1e-4 * x.abs().max(1.0));
    let fp = check_finite(x + h, f(x + h))?;
    let f0 = check_finite(x, f(x))?;
    let fm = check_finite(x - h, f(x - h))?;
    Ok((fp - 2.0 * f0 + fm) / (h * h))
}

/// Central-difference gradient; `step` overrides the per-coordinate default.
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], step: Option<f64>) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = step.unwrap_or_else(|| default_step(x[i]));
        probe[i] = x[i] + h;
        let fp = check_finite(probe[i], f(&probe))?;
        probe[i] = x[i] - h;
        let fm = check_finite(probe[i], f(&probe))?;
        probe[i] = x[i];
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn quadratic_exact() {
        let g = gradient_fd(|v| v[0] * v[0], &[3.0], Some(1e-5)).unwrap();
        assert!((g[0] - 6.0).abs() < 1e-8);
    }

    #[test]
    fn exponential_at_zero() {
        let g = gradient_fd(|v| v[0].exp(), &[0.0], None).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constant_is_exactly_zero() {
        let g = gradient_fd(|_| 4.25, &[1.0, -2.0, 1e6], None).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nan_reported() {
        assert!(matches!(gradient_fd(|_| f64::NAN, &[0.0], None), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn second_difference() {
        let d = second_derivative_fd(|x| x.powi(3), 2.0, None).unwrap();
        assert!((d - 12.0).abs() < 1e-5);
    }
}
