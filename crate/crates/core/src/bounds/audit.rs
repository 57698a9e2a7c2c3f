//! Every applicable Poincaré criterion for a one-dimensional law, side by side
//! with the finite-volume spectral oracle.

use serde::{Deserialize, Serialize};

use super::routes::{posterior_curvature, posterior_poincare};
use crate::error::Result;
use crate::measures::Distribution1D;
use crate::numerics::poincare_constant_1d_numeric;
use crate::poincare::{
    bound_bakry_emery, bound_francesi, bound_holley_stroock, bound_payne_weinberger, oscillation, Criterion,
    FnPotential, FrancesiParams, FrancesiVariant, PoincareBound, ZeroPotential,
};

const OSC_GRID: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub criterion: Criterion,
    /// `None` when the criterion does not apply; `reason` says why.
    pub value: Option<f64>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareAudit {
    pub oracle: f64,
    pub oracle_grid: usize,
    pub entries: Vec<AuditEntry>,
}

impl PoincareAudit {
    pub fn value(&self, criterion: Criterion) -> Option<f64> {
        self.entries.iter().find(|e| e.criterion == criterion).and_then(|e| e.value)
    }

    /// Applicable bounds falling below `oracle - tol`.
    pub fn violations(&self, tol: f64) -> Vec<&AuditEntry> {
        self.entries.iter().filter(|e| e.value.is_some_and(|v| v < self.oracle - tol)).collect()
    }
}

/// Bakry–Émery, the two diameter bounds, Bobkov, Muckenhoupt, Holley–Stroock
/// and the first Francesi variant at `n = 1`, against the oracle on `oracle_grid` cells.
///
/// Holley–Stroock perturbs Lebesgue measure on a bounded support, and
/// `N(mean, variance)` otherwise; in the second case the oscillation is
/// measured over the mass window only.
pub fn poincare_audit(d: &Distribution1D, oracle_grid: usize) -> Result<PoincareAudit> {
    let oracle = {
        let dd = d.clone();
        poincare_constant_1d_numeric(move |x| dd.pdf(x), d.support(), oracle_grid)?
    };
    let mut entries = Vec::new();
    for criterion in [
        Criterion::BakryEmery,
        Criterion::PayneWeinberger,
        Criterion::LogConcaveDiam,
        Criterion::Bobkov,
        Criterion::Muckenhoupt1d,
    ] {
        entries.push(entry(criterion, posterior_poincare(d, criterion)));
    }
    entries.push(entry(Criterion::HolleyStroock, holley_stroock(d).map(|b| b.value)));
    entries.push(entry(Criterion::Francesi1, francesi_one(d).map(|b| b.value)));
    Ok(PoincareAudit { oracle, oracle_grid, entries })
}

fn entry(criterion: Criterion, r: Result<f64>) -> AuditEntry {
    match r {
        Ok(v) => AuditEntry { criterion, value: Some(v), reason: None },
        Err(e) => AuditEntry { criterion, value: None, reason: Some(e.to_string()) },
    }
}

fn holley_stroock(d: &Distribution1D) -> Result<PoincareBound> {
    let support = d.support();
    if support.is_bounded() {
        let eps = 1e-9 * support.width();
        let osc = oscillation(|x| d.log_pdf(x), support.lo() + eps, support.hi() - eps, OSC_GRID)?;
        return bound_holley_stroock(&bound_payne_weinberger(support.width())?, osc);
    }
    let (mean, var) = d.mean_variance();
    let (lo, hi) = d.window();
    let osc = oscillation(|x| d.log_pdf(x) + (x - mean) * (x - mean) / (2.0 * var), lo, hi, OSC_GRID)?;
    bound_holley_stroock(&bound_bakry_emery(1.0 / var)?, osc)
}

fn francesi_one(d: &Distribution1D) -> Result<PoincareBound> {
    let alpha = posterior_curvature(d)?;
    let dd = d.clone();
    let v = FnPotential::new(1, move |x: &[f64]| -dd.log_pdf(x[0]));
    let params = FrancesiParams { alpha, h: 0.0, ..Default::default() };
    bound_francesi(&v, &ZeroPotential(1), 1, FrancesiVariant::One, &params)
}
