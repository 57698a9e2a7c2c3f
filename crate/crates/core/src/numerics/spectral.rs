//! Finite-volume oracle for the weighted Neumann spectral gap in one dimension.
//!
//! The problem `-(w u')' = λ w u` with zero flux at both ends is discretised on
//! cell centres and symmetrised to a tridiagonal matrix; the second-smallest
//! eigenvalue is located by Sturm-sequence bisection.

use super::Interval;
use crate::error::{Error, Result};

/// Relative weight level at which unbounded domains are truncated.
pub const TRUNCATION_LEVEL: f64 = 1e-14;

/// Numerical Poincaré constant `1/sqrt(λ₂)` of the (unnormalised) weight `density` on `domain`.
pub fn poincare_constant_1d_numeric<F: Fn(f64) -> f64>(
    density: F,
    domain: Interval,
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 16 {
        return Err(Error::InvalidInput(format!("grid_size must be >= 16, got {grid_size}")));
    }
    let (a, b) = truncate(&density, domain)?;
    let n = grid_size;
    let h = (b - a) / n as f64;
    let centres: Vec<f64> = (0..n).map(|i| density(a + (i as f64 + 0.5) * h)).collect();
    let faces: Vec<f64> = (1..n).map(|i| density(a + i as f64 * h)).collect();
    if let Some(&bad) = centres.iter().chain(&faces).find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidInput(format!("density must be finite and nonnegative, got {bad}")));
    }
    let underflow = |w: f64| !(w.is_normal());
    let n_under = centres.iter().filter(|&&w| underflow(w)).count();
    if 2 * n_under > n {
        return Err(Error::Degenerate(format!("density underflows on {n_under} of {n} grid nodes")));
    }
    let first = centres.iter().position(|&w| !underflow(w)).expect("some node is positive");
    let last = centres.iter().rposition(|&w| !underflow(w)).expect("some node is positive");
    if centres[first..=last].iter().any(|&w| underflow(w)) {
        return Err(Error::Degenerate("density vanishes inside the domain".into()));
    }
    let w = &centres[first..=last];
    let wf = &faces[first..last];
    if w.len() < 3 {
        return Err(Error::Degenerate("fewer than three positive grid nodes".into()));
    }
    let gap = neumann_gap(w, wf, h)?;
    Ok(1.0 / gap.sqrt())
}

/// Second-smallest eigenvalue of the symmetrised weighted Neumann Laplacian.
pub fn neumann_gap(w: &[f64], faces: &[f64], h: f64) -> Result<f64> {
    let m = w.len();
    debug_assert_eq!(faces.len() + 1, m);
    let h2 = h * h;
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m - 1];
    for i in 0..m {
        let left = if i > 0 { faces[i - 1] } else { 0.0 };
        let right = if i + 1 < m { faces[i] } else { 0.0 };
        diag[i] = (left + right) / (h2 * w[i]);
    }
    for i in 0..m - 1 {
        off[i] = -faces[i] / (h2 * (w[i] * w[i + 1]).sqrt());
    }
    let upper = (0..m)
        .map(|i| {
            let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < m { off[i].abs() } else { 0.0 };
            diag[i] + l + r
        })
        .fold(0.0, f64::max);
    if !upper.is_finite() {
        return Err(Error::NumericalFailure("non-finite Neumann matrix".into()));
    }
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&diag, &off, mid) >= 2 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let gap = 0.5 * (lo + hi);
    if !(gap > 0.0) {
        return Err(Error::Degenerate("spectral gap is zero".into()));
    }
    Ok(gap)
}

/// Number of eigenvalues strictly below `sigma`.
fn sturm_count(diag: &[f64], off: &[f64], sigma: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - sigma;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if d == 0.0 { f64::EPSILON * (diag[i - 1].abs() + 1.0) } else { d };
        d = diag[i] - sigma - off[i - 1] * off[i - 1] / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Truncation window: finite ends are kept, infinite ends are cut where the
/// weight drops below `TRUNCATION_LEVEL` times its maximum.
fn truncate<F: Fn(f64) -> f64>(density: &F, domain: Interval) -> Result<(f64, f64)> {
    if domain.is_bounded() {
        return Ok((domain.lo(), domain.hi()));
    }
    let anchor = match (domain.lo().is_finite(), domain.hi().is_finite()) {
        (true, false) => domain.lo(),
        (false, true) => domain.hi(),
        _ => 0.0,
    };
    let mut probes = vec![anchor];
    for k in -8..64 {
        let s = 2f64.powi(k);
        for x in [anchor + s, anchor - s] {
            if domain.contains(x) {
                probes.push(x);
            }
        }
    }
    let (mut xmax, mut wmax) = (anchor, 0.0);
    for &x in &probes {
        let v = density(x);
        if v.is_finite() && v > wmax {
            wmax = v;
            xmax = x;
        }
    }
    if !(wmax > 0.0) {
        return Err(Error::Degenerate("density vanishes on all probe points".into()));
    }
    let level = TRUNCATION_LEVEL * wmax;
    let cut = |dir: f64| -> Result<f64> {
        let mut step = 1.0_f64.max(xmax.abs() * 1e-3);
        let mut inside = xmax;
        for _ in 0..200 {
            let x = xmax + dir * step;
            if density(x) < level {
                let (mut a, mut b) = (inside, x);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if density(m) < level {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                return Ok(b);
            }
            inside = x;
            step *= 2.0;
        }
        Err(Error::NonIntegrable("weight does not decay on an unbounded end".into()))
    };
    let lo = if domain.lo().is_finite() { domain.lo() } else { cut(-1.0)? };
    let hi = if domain.hi().is_finite() { domain.hi() } else { cut(1.0)? };
    Ok((lo, hi))
}
