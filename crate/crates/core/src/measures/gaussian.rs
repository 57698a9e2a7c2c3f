use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Multivariate normal law with a positive semidefinite covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVec {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianVec {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if d == 0 || covariance.nrows() != d || covariance.ncols() != d {
            return Err(Error::InvalidInput(format!(
                "mean of length {d} does not match a {}x{} covariance",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("gaussian parameters must be finite".into()));
        }
        let asym = (&covariance - covariance.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::InvalidInput(format!("covariance asymmetric by {asym:e}")));
        }
        let eig = covariance.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min < -1e-12 {
            return Err(Error::InvalidInput(format!("covariance has negative eigenvalue {min:e}")));
        }
        Ok(Self { mean, covariance })
    }

    pub fn univariate(mean: f64, variance: f64) -> Result<Self> {
        Self::new(DVector::from_element(1, mean), DMatrix::from_element(1, 1, variance))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }
}
