use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Distribution1D;
use crate::models::PosteriorKernel;
use crate::numerics::GaussLegendre;
use crate::transport::wasserstein_1d;

/// Quadrature nodes per cell for the cell-averaged posterior.
pub const CELL_NODES: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenyiReport {
    pub epsilon: f64,
    pub k_cells: usize,
    pub max_error: f64,
    /// `L ε`.
    pub bound: f64,
    pub argmax: f64,
    pub probes: usize,
}

impl RenyiReport {
    pub fn within_bound(&self) -> bool {
        self.max_error <= self.bound
    }
}

/// Cell-averaged posterior `∫_A π(·|y) χ(dy)/χ(A)` on one cell.
pub fn cell_posterior(
    kernel: &PosteriorKernel,
    cell: (f64, f64),
    chi: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<Distribution1D> {
    let gl = GaussLegendre::cached(CELL_NODES);
    let mut parts = Vec::with_capacity(CELL_NODES);
    for (y, w) in gl.mapped(cell.0, cell.1) {
        let weight = w * chi(y);
        if weight > 0.0 {
            parts.push((weight, kernel.posterior(&[y])?));
        }
    }
    let total: f64 = parts.iter().map(|p| p.0).sum();
    if !(total > 0.0) {
        return Err(Error::InvalidInput(format!("χ has no mass on cell {cell:?}")));
    }
    parts.iter_mut().for_each(|p| p.0 /= total);
    Distribution1D::mixture(&parts)
}

/// Max over `probes` evenly spaced points of `W1(π(·|x), π_ε(·|x))`, with
/// `ε = width/k`. `chi` is the marginal density on the box (uniform when `None`).
pub fn renyi_approx(
    kernel: &PosteriorKernel,
    x_box: (f64, f64),
    k_cells: usize,
    probes: usize,
    lipschitz: f64,
    chi: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Result<RenyiReport> {
    if k_cells == 0 || probes < 2 || !(x_box.0 < x_box.1) {
        return Err(Error::InvalidInput("need k ≥ 1 cells, at least two probes and a nonempty box".into()));
    }
    let uniform = |_: f64| 1.0;
    let chi = chi.unwrap_or(&uniform);
    let eps = (x_box.1 - x_box.0) / k_cells as f64;
    let cells: Vec<Distribution1D> = (0..k_cells)
        .into_par_iter()
        .map(|j| {
            let a = x_box.0 + j as f64 * eps;
            cell_posterior(kernel, (a, a + eps), chi)
        })
        .collect::<Result<_>>()?;
    let errors: Vec<(f64, f64)> = (0..probes)
        .into_par_iter()
        .map(|i| {
            let x = x_box.0 + (x_box.1 - x_box.0) * i as f64 / (probes - 1) as f64;
            let j = (((x - x_box.0) / eps).floor() as usize).min(k_cells - 1);
            let w = wasserstein_1d(&kernel.posterior(&[x])?, &cells[j], 1.0)?;
            Ok((x, w))
        })
        .collect::<Result<_>>()?;
    let (argmax, max_error) = errors.into_iter().fold((x_box.0, 0.0), |acc, e| if e.1 > acc.1 { e } else { acc });
    Ok(RenyiReport { epsilon: eps, k_cells, max_error, bound: lipschitz * eps, argmax, probes })
}
