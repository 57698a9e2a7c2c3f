//! One-dimensional Muckenhoupt-type bound via the quantities `D⁻`, `D⁺`.
//!
//! With `m` the median of a density `q` on `(a, b)`:
//! `D⁻ = sup_{x<m} (∫_a^x q)(∫_x^m 1/q)` and `D⁺ = sup_{x>m} (∫_x^b q)(∫_m^x 1/q)`,
//! and the Poincaré constant is at most `2·max(√D⁺, √D⁻)`.

use serde::{Deserialize, Serialize};

use super::{Criterion, PoincareBound};
use crate::error::{Error, Result};
use crate::measures::Distribution1D;
use crate::numerics::{golden_max, GaussLegendre};

const GRID: usize = 512;
const RULE: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuckenhouptBound {
    pub bound: PoincareBound,
    pub d_minus: f64,
    pub d_plus: f64,
    pub median: f64,
    /// Maximisers of the two suprema.
    pub argmax_minus: f64,
    pub argmax_plus: f64,
}

pub fn bound_muckenhoupt_1d(d: &Distribution1D) -> Result<MuckenhouptBound> {
    let m = d.median();
    let (lo, hi) = d.window();
    let (d_minus, argmax_minus) = side_sup(d, m, lo, |x| d.cdf(x))?;
    let (d_plus, argmax_plus) = side_sup(d, m, hi, |x| d.survival(x))?;
    let value = 2.0 * d_plus.sqrt().max(d_minus.sqrt());
    let digest = format!("median={m}, D-={d_minus}, D+={d_plus}, window=[{lo}, {hi}]");
    Ok(MuckenhouptBound {
        bound: PoincareBound::new(value, Criterion::Muckenhoupt1d, digest)?,
        d_minus,
        d_plus,
        median: m,
        argmax_minus,
        argmax_plus,
    })
}

/// `sup_x mass(x) · |∫_x^m 1/q|` for `x` between `end` and `m`.
fn side_sup<M: Fn(f64) -> f64>(d: &Distribution1D, m: f64, end: f64, mass: M) -> Result<(f64, f64)> {
    if !(end - m).is_normal() {
        return Ok((0.0, m));
    }
    let gl = GaussLegendre::cached(RULE);
    let inv_q = |a: f64, b: f64| -> Result<f64> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let mut s = 0.0;
        for (x, w) in gl.mapped(a, b) {
            let v = 1.0 / d.pdf(x);
            if !v.is_finite() {
                return Err(Error::NonConvergent(format!("1/q is not integrable near {x}")));
            }
            s += w * v;
        }
        Ok(s)
    };
    // xs[0] = m, xs[GRID] = end; acc[k] = |∫_{xs[k]}^m 1/q|.
    let xs: Vec<f64> = (0..=GRID).map(|k| m + (end - m) * k as f64 / GRID as f64).collect();
    let mut acc = vec![0.0; GRID + 1];
    for k in 1..=GRID {
        acc[k] = acc[k - 1] + inv_q(xs[k - 1], xs[k])?;
    }
    let mut best = 0;
    let mut best_val = 0.0;
    for k in 1..=GRID {
        let v = mass(xs[k]) * acc[k];
        if v > best_val {
            best_val = v;
            best = k;
        }
    }
    if best == 0 {
        return Ok((0.0, m));
    }
    // Refine on [xs[best-1], xs[min(best+1, GRID)]], anchoring the integral at xs[best-1].
    let anchor = best - 1;
    let far = (best + 1).min(GRID);
    let mut err = None;
    let (x, v) = golden_max(
        |x| match inv_q(xs[anchor], x) {
            Ok(extra) => mass(x) * (acc[anchor] + extra),
            Err(e) => {
                err.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        xs[anchor],
        xs[far],
        1e-10,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(if v > best_val { (v, x) } else { (best_val, xs[best]) })
}
