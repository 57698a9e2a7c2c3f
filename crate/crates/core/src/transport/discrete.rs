use serde::{Deserialize, Serialize};

use super::simplex::NetworkSimplex;
use super::sinkhorn::{sinkhorn_divergence, SinkhornSpec};
use crate::error::{Error, Result};
use crate::measures::WeightedPoints;

/// Largest atom count accepted by the exact solver.
pub const MAX_EXACT_ATOMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverTag {
    ExactLp,
    Sinkhorn,
    Quantile,
    GaussianClosedForm,
    TvDensity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OtMode {
    Exact,
    /// Debiased entropic transport with the given final regularisation.
    Entropic(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlanResult {
    /// `W_p`, i.e. the optimal `Σ π c` raised to `1/p`.
    pub cost: f64,
    /// Sparse plan `(i, j, mass)` in the input indexing, exact mode only.
    pub plan: Option<Vec<(usize, usize, f64)>>,
    pub solver: SolverTag,
}

fn ground_cost(x: &[f64], y: &[f64], p: f64) -> f64 {
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    if p == 2.0 {
        sq
    } else if p == 1.0 {
        sq.sqrt()
    } else {
        sq.sqrt().powf(p)
    }
}

/// Optimal transport between two weighted point clouds with cost `|x - y|^p`.
pub fn ot_discrete(mu: &WeightedPoints, nu: &WeightedPoints, p: f64, mode: OtMode) -> Result<TransportPlanResult> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("transport order must be >= 1, got {p}")));
    }
    if mu.dim() != nu.dim() {
        return Err(Error::InvalidInput(format!("dimension mismatch {} vs {}", mu.dim(), nu.dim())));
    }
    for (name, m) in [("first", mu), ("second", nu)] {
        let total = m.total_mass();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Infeasible(format!("{name} marginal has mass {total}")));
        }
    }
    let index_a: Vec<usize> = (0..mu.len()).filter(|&i| mu.weights()[i] > 0.0).collect();
    let index_b: Vec<usize> = (0..nu.len()).filter(|&j| nu.weights()[j] > 0.0).collect();
    let (a, b) = (mu.compact(), nu.compact());
    match mode {
        OtMode::Exact => {
            if a.len() > MAX_EXACT_ATOMS || b.len() > MAX_EXACT_ATOMS {
                return Err(Error::InvalidInput(format!(
                    "exact transport limited to {MAX_EXACT_ATOMS} atoms, got {} and {}",
                    a.len(),
                    b.len()
                )));
            }
            let cost = |i: usize, j: usize| ground_cost(a.point(i), b.point(j), p);
            let max_cost = max_cost_bound(&a, &b, p);
            let supplies: Vec<f64> = a.weights().to_vec();
            let scale = a.total_mass() / b.total_mass();
            let demands: Vec<f64> = b.weights().iter().map(|w| w * scale).collect();
            let mut solver = NetworkSimplex::new(&supplies, &demands, cost, max_cost);
            solver.solve(usize::MAX / 2)?;
            let total = solver.total_cost();
            let plan = solver.plan().into_iter().map(|(i, j, m)| (index_a[i], index_b[j], m)).collect();
            Ok(TransportPlanResult { cost: total.max(0.0).powf(1.0 / p), plan: Some(plan), solver: SolverTag::ExactLp })
        }
        OtMode::Entropic(eps) => {
            let spec = SinkhornSpec { epsilon: eps, ..SinkhornSpec::default() };
            let value = sinkhorn_divergence(&a, &b, p, &spec)?;
            Ok(TransportPlanResult { cost: value.max(0.0).powf(1.0 / p), plan: None, solver: SolverTag::Sinkhorn })
        }
    }
}

/// Upper bound on the ground cost from the joint bounding box.
fn max_cost_bound(a: &WeightedPoints, b: &WeightedPoints, p: f64) -> f64 {
    let d = a.dim();
    let mut diam_sq = 0.0;
    for k in 0..d {
        let coords = (0..a.len()).map(|i| a.point(i)[k]).chain((0..b.len()).map(|j| b.point(j)[k]));
        let (lo, hi) = coords.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
        diam_sq += (hi - lo) * (hi - lo);
    }
    diam_sq.sqrt().powf(p)
}
