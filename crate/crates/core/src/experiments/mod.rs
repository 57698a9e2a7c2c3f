//! Empirical checks of certified constants and of the asymptotic statements they feed.
//!
//! Every randomized harness derives one RNG stream per work item from
//! `(seed, item index)`, so reports are identical under any thread schedule.

mod bole;
mod contraction;
mod mixture;
mod renyi;
mod sweep;
mod wiener;

pub use bole::{bole_condition_check, BoleOutcome, Side, DIVERGENCE_EXPONENT};
pub use contraction::{contraction_experiment, ols, ContractionReport, ContractionRow};
pub use mixture::{mixture_posterior, MixturePosterior};
pub use renyi::{cell_posterior, renyi_approx, RenyiReport, CELL_NODES};
pub use sweep::{
    median_ratio, ratio_sweep, ratio_sweep_grid, sample_pair, GridSweepReport, PairRecord, RatioSweepReport,
    TAU_NUM,
};
pub use wiener::{wiener_pair_distance, wiener_uniformity, WienerReport, WienerRow};
