//! Finite-`j` Gaussian family built on Brownian covariance.
//!
//! The vector `v_j(x)` interpolates the hat basis at `x`, with the
//! coordinate for the origin dropped because the path is pinned there.
//! Entries are indexed `1..=j`: index `k` carries `(k + 1 - jx)/√j` and
//! index `k + 1` carries `(jx - k)/√j`, where `k = ⌊jx⌋`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::measures::GaussianVec;

pub const MAX_J: usize = 128;

/// `Σ_j[r, s] = min(r, s)/j` for `r, s ∈ 1..=j`.
pub fn brownian_covariance(j: usize) -> DMatrix<f64> {
    DMatrix::from_fn(j, j, |r, s| (r.min(s) + 1) as f64 / j as f64)
}

/// The sparse vector `v_j(x)`, stored 0-based (storage `i` is index `i + 1`).
pub fn wiener_v(j: usize, x: f64) -> Result<DVector<f64>> {
    check(j, x)?;
    let jf = j as f64;
    let k = ((jf * x).floor() as usize).min(j);
    let s = jf.sqrt();
    let mut v = DVector::zeros(j);
    let mut put = |index: usize, value: f64| {
        if (1..=j).contains(&index) {
            v[index - 1] = value / s;
        }
    };
    put(k, k as f64 + 1.0 - jf * x);
    put(k + 1, jf * x - k as f64);
    Ok(v)
}

fn check(j: usize, x: f64) -> Result<()> {
    if !(2..=MAX_J).contains(&j) {
        return Err(Error::InvalidInput(format!("j must lie in 2..={MAX_J}, got {j}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidInput(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// `N_j(Σ_j v_j(x), Σ_j)`.
pub fn wiener_family(j: usize, x: f64) -> Result<GaussianVec> {
    let sigma = brownian_covariance(j);
    let mean = &sigma * wiener_v(j, x)?;
    GaussianVec::new(mean, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_have_one_entry() {
        for j in [2usize, 5, 16] {
            for k in 1..=j {
                let v = wiener_v(j, k as f64 / j as f64).unwrap();
                let nz: Vec<usize> = (0..j).filter(|&i| v[i] != 0.0).collect();
                assert_eq!(nz, vec![k - 1], "j={j} k={k}");
                assert!((v[k - 1] - 1.0 / (j as f64).sqrt()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn at_most_two_entries_and_affine_in_cell() {
        let j = 8;
        for x in [0.03, 0.2, 0.51, 0.99] {
            let v = wiener_v(j, x).unwrap();
            assert!(v.iter().filter(|e| **e != 0.0).count() <= 2);
        }
        let a = wiener_v(j, 0.30).unwrap();
        let b = wiener_v(j, 0.32).unwrap();
        let c = wiener_v(j, 0.34).unwrap();
        assert!(((&a + &c) * 0.5 - &b).amax() < 1e-15);
    }

    #[test]
    fn covariance_psd_with_unit_corner() {
        for j in [2usize, 7, 32] {
            let s = brownian_covariance(j);
            assert_eq!(s[(j - 1, j - 1)], 1.0);
            let eig = s.clone().symmetric_eigen();
            assert!(eig.eigenvalues.iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(wiener_family(1, 0.5).is_err());
        assert!(wiener_family(129, 0.5).is_err());
        assert!(wiener_family(4, 1.5).is_err());
    }
}
