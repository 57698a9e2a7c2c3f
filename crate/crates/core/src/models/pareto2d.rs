//! Two-parameter Pareto model `f(x|θ, ε) = ε θ^ε / x^{1+ε} · 1{θ < x}` on `(θ, ε) ∈ (1, 2)²`.
//!
//! Posteriors are represented by weighted tensor grids. The pullback grid
//! maps a fixed midpoint grid of `(1, 2)²` onto `(1, x∧2) × (1, 2)` through
//! `θ = (s - 1)(x∧2 - 1) + 1`, so every node lies inside the support. The
//! fixed grid keeps trapezoid nodes on `[1, 2]²` and zeroes those with `θ ≥ x`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::WeightedPoints;

pub const MIN_RESOLUTION: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    #[default]
    Pullback,
    Fixed,
}

type PriorDensity = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct Pareto2Param {
    prior: PriorDensity,
    resolution: usize,
    mode: GridMode,
}

impl std::fmt::Debug for Pareto2Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pareto2Param").field("resolution", &self.resolution).field("mode", &self.mode).finish()
    }
}

impl Pareto2Param {
    /// Uniform prior on `(1, 2)²`.
    pub fn uniform(resolution: usize, mode: GridMode) -> Result<Self> {
        Self::with_prior(Arc::new(|_, _| 1.0), resolution, mode)
    }

    pub fn with_prior(prior: PriorDensity, resolution: usize, mode: GridMode) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidInput(format!("grid resolution must be >= {MIN_RESOLUTION}, got {resolution}")));
        }
        Ok(Self { prior, resolution, mode })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn mode(&self) -> GridMode {
        self.mode
    }

    pub fn likelihood(x: f64, theta: f64, eps: f64) -> f64 {
        if theta < x {
            eps * theta.powf(eps) / x.powf(1.0 + eps)
        } else {
            0.0
        }
    }

    /// Normalised posterior weights on the grid; coordinates are `(θ, ε)` pairs.
    pub fn posterior_grid(&self, x: f64) -> Result<WeightedPoints> {
        if !(x > 1.0) || !x.is_finite() {
            return Err(Error::ZeroEvidence { x: vec![x], evidence: 0.0 });
        }
        let n = self.resolution;
        let (thetas, theta_w, eps, eps_w) = match self.mode {
            GridMode::Pullback => {
                let top = x.min(2.0);
                let mid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
                let thetas = mid.iter().map(|s| 1.0 + s * (top - 1.0)).collect();
                let eps = mid.iter().map(|s| 1.0 + s).collect();
                (thetas, vec![(top - 1.0) / n as f64; n], eps, vec![1.0 / n as f64; n])
            }
            GridMode::Fixed => {
                let nodes: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / (n - 1) as f64).collect();
                let h = 1.0 / (n - 1) as f64;
                let w: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect();
                (nodes.clone(), w.clone(), nodes, w)
            }
        };
        let mut coords = Vec::with_capacity(2 * n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (i, &t) in thetas.iter().enumerate() {
            for (j, &e) in eps.iter().enumerate() {
                coords.push(t);
                coords.push(e);
                weights.push(theta_w[i] * eps_w[j] * Self::likelihood(x, t, e) * (self.prior)(t, e));
            }
        }
        let evidence: f64 = weights.iter().sum();
        if !(evidence > super::TOL_EVIDENCE) {
            return Err(Error::ZeroEvidence { x: vec![x], evidence });
        }
        weights.iter_mut().for_each(|w| *w /= evidence);
        WeightedPoints::new(2, coords, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_grid_matches_formula_and_truncates() {
        let model = Pareto2Param::uniform(64, GridMode::Fixed).unwrap();
        let x = 1.5;
        let g = model.posterior_grid(x).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-12);
        for i in 0..g.len() {
            let p = g.point(i);
            if p[0] >= x {
                assert_eq!(g.weights()[i], 0.0);
            }
        }
    }

    #[test]
    fn uniform_prior_at_two() {
        let n = 40;
        let model = Pareto2Param::uniform(n, GridMode::Fixed).unwrap();
        let g = model.posterior_grid(2.0).unwrap();
        let h = 1.0 / (n - 1) as f64;
        // Interior nodes share the same quadrature weight, so ratios follow the density.
        let f = |t: f64, e: f64| e * t.powf(e) / 2f64.powf(e + 1.0);
        let (a, b) = (n + 1, 5 * n + 7);
        let (pa, pb) = (g.point(a).to_vec(), g.point(b).to_vec());
        assert!(pa[0] > 1.0 + h / 2.0 && pb[0] < 2.0 - h / 2.0);
        let ratio = g.weights()[a] / g.weights()[b];
        assert!((ratio - f(pa[0], pa[1]) / f(pb[0], pb[1])).abs() < 1e-12);
    }

    #[test]
    fn pullback_nodes_inside_support() {
        let model = Pareto2Param::uniform(64, GridMode::Pullback).unwrap();
        let g = model.posterior_grid(1.2).unwrap();
        assert_eq!(g.len(), 64 * 64);
        assert!((0..g.len()).all(|i| g.point(i)[0] < 1.2 && g.weights()[i] > 0.0));
        assert!((g.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_coarse_grid() {
        assert!(Pareto2Param::uniform(16, GridMode::Pullback).is_err());
    }
}
