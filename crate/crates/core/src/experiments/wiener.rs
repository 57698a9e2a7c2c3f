use serde::{Deserialize, Serialize};

use super::sweep::sample_pair;
use crate::error::{Error, Result};
use crate::models::{wiener_family, MAX_J};
use crate::transport::gaussian_w2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WienerRow {
    pub j: usize,
    /// `max over pairs of W2(π'_j(x₁), π'_j(x₂)) / (√j |x₁ - x₂|)`.
    pub constant: f64,
    pub argmax: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WienerReport {
    pub rows: Vec<WienerRow>,
    /// `max_j C_j / min_j C_j - 1`, the largest relative gap between any two constants.
    pub spread: f64,
    pub seed: u64,
    pub n_pairs: usize,
}

/// `W2(π'_j(·|x₁), π'_j(·|x₂))` scaled by the `1/√j` Lipschitz constant of the interpolation map.
pub fn wiener_pair_distance(j: usize, x1: f64, x2: f64) -> Result<f64> {
    let a = wiener_family(j, x1)?;
    let b = wiener_family(j, x2)?;
    Ok(gaussian_w2(&a, &b)? / (j as f64).sqrt())
}

/// Per-`j` Lipschitz constants over the given pairs, or `n_pairs` seeded
/// uniform pairs in `[0, 1]` when `x_pairs` is empty.
pub fn wiener_uniformity(j_values: &[usize], x_pairs: &[(f64, f64)], n_pairs: usize, seed: u64) -> Result<WienerReport> {
    if j_values.is_empty() || j_values.iter().any(|j| !(2..=MAX_J).contains(j)) {
        return Err(Error::InvalidInput(format!("j values must lie in 2..={MAX_J}")));
    }
    let pairs: Vec<(f64, f64)> = if x_pairs.is_empty() {
        (0..n_pairs as u64).map(|i| sample_pair((0.0, 1.0), seed, i)).collect()
    } else {
        x_pairs.to_vec()
    };
    let mut rows = Vec::with_capacity(j_values.len());
    for &j in j_values {
        let mut best = WienerRow { j, constant: 0.0, argmax: (0.0, 0.0) };
        for &(x1, x2) in &pairs {
            let dx = (x1 - x2).abs();
            if dx == 0.0 {
                continue;
            }
            let c = wiener_pair_distance(j, x1, x2)? / dx;
            if c > best.constant {
                best = WienerRow { j, constant: c, argmax: (x1, x2) };
            }
        }
        rows.push(best);
    }
    let max = rows.iter().map(|r| r.constant).fold(0.0, f64::max);
    let min = rows.iter().map(|r| r.constant).fold(f64::INFINITY, f64::min);
    let spread = if min > 0.0 { max / min - 1.0 } else if max == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(WienerReport { rows, spread, seed, n_pairs: pairs.len() })
}
