//! One-dimensional measures, empirical measures, Gaussian vectors and random streams.

mod distribution;
mod empirical;
mod gaussian;
pub mod rng;

pub use distribution::{quantile_rule, Distribution1D, Hint, LogDensityFn, QUANTILE_CLIP, QUANTILE_NODES};
pub(crate) use distribution::log_sum_exp;
pub use empirical::{EmpiricalMeasure, WeightedPoints};
pub use gaussian::GaussianVec;
