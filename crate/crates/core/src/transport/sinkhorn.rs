//! Log-domain Sinkhorn iterations with an annealed regularisation and the
//! debiased divergence `S_ε(a, b) = OT_ε(a, b) - ½ OT_ε(a, a) - ½ OT_ε(b, b)`.

use crate::error::{Error, Result};
use crate::measures::{log_sum_exp, WeightedPoints};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkhornSpec {
    /// Final regularisation.
    pub epsilon: f64,
    /// First regularisation of the annealing schedule.
    pub start_epsilon: f64,
    /// Multiplicative decrease per stage.
    pub decay: f64,
    /// Iteration cap of the final stage.
    pub max_iterations: usize,
    /// L1 marginal violation accepted at the final stage.
    pub tolerance: f64,
}

impl Default for SinkhornSpec {
    fn default() -> Self {
        Self { epsilon: 1e-3, start_epsilon: 1.0, decay: 0.5, max_iterations: 20_000, tolerance: 1e-9 }
    }
}

fn cost_matrix(a: &WeightedPoints, b: &WeightedPoints, p: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            let d: f64 = a.point(i).iter().zip(b.point(j)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
            c.push(d.powf(p));
        }
    }
    c
}

/// Regularised transport value `OT_ε`.
fn entropic_value(a: &[f64], b: &[f64], cost: &[f64], spec: &SinkhornSpec) -> Result<f64> {
    let (n, m) = (a.len(), b.len());
    let la: Vec<f64> = a.iter().map(|w| w.ln()).collect();
    let lb: Vec<f64> = b.iter().map(|w| w.ln()).collect();
    let mut f = vec![0.0; n];
    let mut g = vec![0.0; m];
    let mut eps = spec.start_epsilon.max(spec.epsilon);
    let mut buf = vec![0.0; n.max(m)];
    loop {
        let last = eps <= spec.epsilon;
        let cap = if last { spec.max_iterations } else { 200 };
        let mut converged = false;
        for _ in 0..cap {
            for i in 0..n {
                for j in 0..m {
                    buf[j] = (g[j] - cost[i * m + j]) / eps + lb[j];
                }
                f[i] = -eps * log_sum_exp(&buf[..m]);
            }
            for j in 0..m {
                for i in 0..n {
                    buf[i] = (f[i] - cost[i * m + j]) / eps + la[i];
                }
                g[j] = -eps * log_sum_exp(&buf[..n]);
            }
            // columns are exact after the g update; measure the row violation
            let mut err = 0.0;
            for i in 0..n {
                for j in 0..m {
                    buf[j] = (f[i] + g[j] - cost[i * m + j]) / eps + la[i] + lb[j];
                }
                err += (log_sum_exp(&buf[..m]).exp() - a[i]).abs();
            }
            if !err.is_finite() {
                return Err(Error::NumericalFailure("sinkhorn potentials diverged".into()));
            }
            if err < spec.tolerance {
                converged = true;
                break;
            }
        }
        if last {
            if !converged {
                return Err(Error::NonConvergent(format!(
                    "sinkhorn did not reach tolerance {} in {} iterations",
                    spec.tolerance, spec.max_iterations
                )));
            }
            break;
        }
        eps = (eps * spec.decay).max(spec.epsilon);
    }
    Ok(f.iter().zip(a).map(|(x, w)| x * w).sum::<f64>() + g.iter().zip(b).map(|(x, w)| x * w).sum::<f64>())
}

/// Debiased Sinkhorn divergence for cost `|x - y|^p`; approximates `W_p^p`.
pub fn sinkhorn_divergence(a: &WeightedPoints, b: &WeightedPoints, p: f64, spec: &SinkhornSpec) -> Result<f64> {
    if !(spec.epsilon > 0.0) || !(spec.decay > 0.0 && spec.decay < 1.0) {
        return Err(Error::InvalidInput("sinkhorn needs epsilon > 0 and decay in (0, 1)".into()));
    }
    let ab = entropic_value(a.weights(), b.weights(), &cost_matrix(a, b, p), spec)?;
    let aa = entropic_value(a.weights(), a.weights(), &cost_matrix(a, a, p), spec)?;
    let bb = entropic_value(b.weights(), b.weights(), &cost_matrix(b, b, p), spec)?;
    Ok(ab - 0.5 * (aa + bb))
}
