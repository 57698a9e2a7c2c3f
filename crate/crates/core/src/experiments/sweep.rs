use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{LipschitzCertificate, Metric};
use crate::error::{Error, Result};
use crate::measures::rng::{stream_rng, uniform};
use crate::models::{Pareto2Param, PosteriorKernel};
use crate::transport::{ot_discrete, tv_distance, wasserstein_1d, OtMode};

/// Relative slack allowed above the certified constant.
pub const TAU_NUM: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub x1: f64,
    pub x2: f64,
    pub posterior_distance: f64,
    pub input_distance: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSweepReport {
    pub pairs: Vec<PairRecord>,
    pub max_ratio: f64,
    pub certificate: LipschitzCertificate,
    pub x_box: (f64, f64),
    pub seed: u64,
    pub passed: bool,
    /// The pair with the largest ratio when the sweep fails.
    pub offending: Option<PairRecord>,
}

/// Draws pair `index` uniformly from the box, keeping `|x₁ - x₂| ≥ 1e-3·width`.
pub fn sample_pair(x_box: (f64, f64), seed: u64, index: u64) -> (f64, f64) {
    let mut rng = stream_rng(seed, index);
    draw_pair(&mut rng, x_box)
}

fn draw_pair<R: RngCore + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> (f64, f64) {
    let floor = 1e-3 * (hi - lo);
    loop {
        let a = uniform(rng, lo, hi);
        let b = uniform(rng, lo, hi);
        if (a - b).abs() >= floor {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

fn box_of(certificate: &LipschitzCertificate, x_box: Option<(f64, f64)>) -> Result<(f64, f64)> {
    let b = x_box
        .or_else(|| certificate.x_box())
        .ok_or_else(|| Error::InvalidInput("closed-form certificates need an explicit sweep box".into()))?;
    if !(b.0 < b.1) || !b.0.is_finite() || !b.1.is_finite() {
        return Err(Error::InvalidInput(format!("sweep box must be a finite interval, got {b:?}")));
    }
    Ok(b)
}

fn finish(
    pairs: Vec<PairRecord>,
    certificate: &LipschitzCertificate,
    x_box: (f64, f64),
    seed: u64,
) -> RatioSweepReport {
    let best = pairs.iter().copied().max_by(|a, b| a.ratio.total_cmp(&b.ratio));
    let max_ratio = best.map_or(0.0, |p| p.ratio);
    let passed = max_ratio <= certificate.l * (1.0 + TAU_NUM);
    RatioSweepReport {
        pairs,
        max_ratio,
        certificate: certificate.clone(),
        x_box,
        seed,
        passed,
        offending: if passed { None } else { best },
    }
}

/// Empirical Lipschitz ratios `d(π(·|x₁), π(·|x₂))/|x₁ - x₂|` in the certificate's metric.
///
/// `x_box` overrides the certificate's box; closed-form certificates carry none.
pub fn ratio_sweep(
    kernel: &PosteriorKernel,
    certificate: &LipschitzCertificate,
    x_box: Option<(f64, f64)>,
    n_pairs: usize,
    seed: u64,
) -> Result<RatioSweepReport> {
    let x_box = box_of(certificate, x_box)?;
    let pairs = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let (x1, x2) = sample_pair(x_box, seed, i as u64);
            let (a, b) = (kernel.posterior(&[x1])?, kernel.posterior(&[x2])?);
            let d = match certificate.metric {
                Metric::Tv => tv_distance(&a, &b)?,
                Metric::W1 => wasserstein_1d(&a, &b, 1.0)?,
                Metric::W2 => wasserstein_1d(&a, &b, 2.0)?,
            };
            let input = x2 - x1;
            Ok(PairRecord { x1, x2, posterior_distance: d, input_distance: input, ratio: d / input })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(pairs, certificate, x_box, seed))
}

/// Ratios for a kernel without a closed-form constant; only their uniformity is measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSweepReport {
    pub pairs: Vec<PairRecord>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub resolution: usize,
    pub x_box: (f64, f64),
    pub seed: u64,
}

impl GridSweepReport {
    /// `max/median`, the spread statistic used to judge uniform boundedness.
    pub fn spread(&self) -> f64 {
        self.max_ratio / self.median_ratio
    }
}

/// Ratio sweep for the two-parameter Pareto model, exact discrete `W2` between grid posteriors.
pub fn ratio_sweep_grid(model: &Pareto2Param, x_box: (f64, f64), n_pairs: usize, seed: u64) -> Result<GridSweepReport> {
    if !(x_box.0 > 1.0 && x_box.0 < x_box.1 && x_box.1.is_finite()) {
        return Err(Error::InvalidInput(format!("grid sweep box must lie in (1, ∞), got {x_box:?}")));
    }
    let pairs = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let (x1, x2) = sample_pair(x_box, seed, i as u64);
            let a = model.posterior_grid(x1)?.compact();
            let b = model.posterior_grid(x2)?.compact();
            let d = ot_discrete(&a, &b, 2.0, OtMode::Exact)?.cost;
            let input = x2 - x1;
            Ok(PairRecord { x1, x2, posterior_distance: d, input_distance: input, ratio: d / input })
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = pairs.iter().map(|p| p.ratio).collect();
    Ok(GridSweepReport {
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        median_ratio: median(ratios),
        pairs,
        resolution: model.resolution(),
        x_box,
        seed,
    })
}

/// Median of the pair ratios.
pub fn median_ratio(report: &RatioSweepReport) -> f64 {
    median(report.pairs.iter().map(|p| p.ratio).collect())
}

fn median(mut r: Vec<f64>) -> f64 {
    if r.is_empty() {
        return 0.0;
    }
    r.sort_by(f64::total_cmp);
    let n = r.len();
    if n % 2 == 1 {
        r[n / 2]
    } else {
        0.5 * (r[n / 2 - 1] + r[n / 2])
    }
}
