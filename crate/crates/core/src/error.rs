use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive scheme did not converge: {0}")]
    NonConvergent(String),
    #[error("non-finite value {value} at {at}")]
    NonFinite { at: f64, value: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("evidence {evidence:e} below tolerance at x = {x:?}")]
    ZeroEvidence { x: Vec<f64>, evidence: f64 },
    #[error("kernel density vanishes on a set of positive measure; use the moving-domain route")]
    ZeroDensity,
    #[error("not integrable: {0}")]
    NonIntegrable(String),
    #[error("infeasible transport problem: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("curvature must be positive, got {0}")]
    InvalidCurvature(f64),
    #[error("combined curvature {0} is not positive")]
    CurvatureNonPositive(f64),
    #[error("threshold violated: {0}")]
    ThresholdViolation(String),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
}

pub(crate) fn check_finite(at: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { at, value })
    }
}
