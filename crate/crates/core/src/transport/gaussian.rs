use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::measures::GaussianVec;

fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigendecomposition did not converge".into()))?;
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose())
}

/// Closed-form `W_2` between Gaussians.
pub fn gaussian_w2(a: &GaussianVec, b: &GaussianVec) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput(format!("dimension mismatch {} vs {}", a.dim(), b.dim())));
    }
    let mean_sq = (a.mean() - b.mean()).norm_squared();
    let (sa, sb) = (a.covariance(), b.covariance());
    let rb = psd_sqrt(sb)?;
    let mut inner = &rb * sa * &rb;
    // symmetrise before the second root
    inner = 0.5 * (&inner + inner.transpose());
    let cross = psd_sqrt(&inner)?;
    let bures = sa.trace() + sb.trace() - 2.0 * cross.trace();
    Ok((mean_sq + bures).max(0.0).sqrt())
}
