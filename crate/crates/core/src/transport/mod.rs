//! Probability metrics: total variation, Wasserstein distances on the line,
//! discrete optimal transport and the Gaussian closed form.

mod discrete;
mod gaussian;
mod quantile;
mod simplex;
mod sinkhorn;
mod tv;

pub use discrete::{ot_discrete, OtMode, SolverTag, TransportPlanResult};
pub use gaussian::gaussian_w2;
pub use quantile::{wasserstein_1d, Law1D};
pub use simplex::NetworkSimplex;
pub use sinkhorn::{sinkhorn_divergence, SinkhornSpec};
pub use tv::tv_distance;
