//! Statistical models, priors and the Bayes map to posteriors.

mod expfam;
mod model;
mod pareto;
mod pareto2d;
mod posterior;
mod prior;
mod registry;
mod wiener;

pub use expfam::{ExpFamilyModel, ExpFamilyParts};
pub use model::{LogLik, Model1D};
pub use pareto::{ParetoHModel, ParetoModel, ParetoSampleModel};
pub use pareto2d::{GridMode, Pareto2Param, MIN_RESOLUTION};
pub use posterior::{posterior, posterior_n, Posterior, PosteriorKernel, TOL_EVIDENCE};
pub use prior::{Prior, PriorSpec};
pub use registry::{build_model, check_normalization, ExpFamilyKind, ModelSpec, RegisteredModel, MODEL_NAMES};
pub use wiener::{brownian_covariance, wiener_family, wiener_v, MAX_J};

#[cfg(test)]
mod tests;
