//! Bounds for `μ_n = e^{-nV-U} dθ` whose squared constant decays like `1/n`.
//!
//! Variant 1 needs global convexity of `V`; variants 2 and 3 only need it on the
//! ball `B_R` plus a growth condition outside. Suprema over `B_R` that the
//! caller leaves out are computed on a grid (1024 points in 1D, 64² in 2D).

use crate::error::{Error, Result};
use crate::numerics::{gradient_fd, second_derivative_fd};

use super::{Criterion, PoincareBound};

/// A potential on `ℝ^d` with optional closed-form derivatives.
pub trait Potential: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        gradient_fd(|y| self.value(y), x, None)
    }

    fn laplacian(&self, x: &[f64]) -> Result<f64> {
        fd_laplacian(&|y| self.value(y), x)
    }
}

fn fd_laplacian(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..x.len() {
        total += second_derivative_fd(
            |t| {
                let mut z = x.to_vec();
                z[i] = t;
                f(&z)
            },
            x[i],
            None,
        )?;
    }
    Ok(total)
}

/// The zero potential on `ℝ^dim`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroPotential(pub usize);

impl Potential for ZeroPotential {
    fn dim(&self) -> usize {
        self.0
    }
    fn value(&self, _: &[f64]) -> f64 {
        0.0
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![0.0; x.len()])
    }
    fn laplacian(&self, _: &[f64]) -> Result<f64> {
        Ok(0.0)
    }
}

type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Potential built from closures; derivatives fall back to finite differences.
pub struct FnPotential {
    dim: usize,
    value: ScalarFn,
    gradient: Option<VectorFn>,
    laplacian: Option<ScalarFn>,
}

impl FnPotential {
    pub fn new<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(dim: usize, value: F) -> Self {
        Self { dim, value: Box::new(value), gradient: None, laplacian: None }
    }

    pub fn with_gradient<G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static>(mut self, g: G) -> Self {
        self.gradient = Some(Box::new(g));
        self
    }

    pub fn with_laplacian<L: Fn(&[f64]) -> f64 + Send + Sync + 'static>(mut self, l: L) -> Self {
        self.laplacian = Some(Box::new(l));
        self
    }
}

impl Potential for FnPotential {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.gradient {
            Some(g) => Ok(g(x)),
            None => gradient_fd(|y| (self.value)(y), x, None),
        }
    }
    fn laplacian(&self, x: &[f64]) -> Result<f64> {
        match &self.laplacian {
            Some(l) => Ok(l(x)),
            None => fd_laplacian(&*self.value, x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrancesiVariant {
    One,
    Two,
    Three,
}

/// Constants of the three variants. `alpha`, `h` are the Hessian lower bounds
/// of `V` and `U`; the `Option` suprema are computed on a grid when absent,
/// except `c_r`, which must be supplied for variant 2.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrancesiParams {
    pub alpha: f64,
    pub h: f64,
    pub c: Option<f64>,
    pub ell: Option<f64>,
    pub radius: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c_r: Option<f64>,
    /// `sup_{B_R} |∇V|`.
    pub v_r: Option<f64>,
    /// `sup_{B_R} |∇U|`.
    pub u_r: Option<f64>,
    /// `sup_{B_R} |ΔV|`.
    pub v_r_star: Option<f64>,
    /// `sup_{B_R} |∇U||∇V|`.
    pub w_r: Option<f64>,
    /// `sup_{B_R} V - inf V`.
    pub omega_r: Option<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Grid points of the closed ball of radius `r` in dimension 1 or 2.
fn ball_grid(dim: usize, r: f64, what: &'static str) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok((0..1024).map(|i| vec![-r + 2.0 * r * i as f64 / 1023.0]).collect()),
        2 => {
            let axis: Vec<f64> = (0..64).map(|i| -r + 2.0 * r * i as f64 / 63.0).collect();
            Ok(axis
                .iter()
                .flat_map(|&a| axis.iter().map(move |&b| vec![a, b]))
                .filter(|p| norm(p) <= r * (1.0 + 1e-12))
                .collect())
        }
        _ => Err(Error::MissingParam(what)),
    }
}

fn grid_sup<F: Fn(&[f64]) -> Result<f64>>(pts: &[Vec<f64>], f: F) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for p in pts {
        let v = f(p)?;
        if !v.is_finite() {
            return Err(Error::NonFinite { at: p[0], value: v });
        }
        best = best.max(v);
    }
    Ok(best)
}

fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
    v.ok_or(Error::MissingParam(name))
}

/// Bound on the Poincaré constant of `e^{-nV-U}`; the returned value is the
/// square root of the squared-constant estimate.
pub fn bound_francesi(
    v: &dyn Potential,
    u: &dyn Potential,
    n: u32,
    variant: FrancesiVariant,
    params: &FrancesiParams,
) -> Result<PoincareBound> {
    let FrancesiParams { alpha, h, .. } = *params;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidCurvature(alpha));
    }
    let nf = f64::from(n);
    let convex_threshold = -h / alpha;
    let an_h = alpha * nf + h;
    let dim = v.dim();

    let (c_sq, criterion, digest) = match variant {
        FrancesiVariant::One => {
            if !(nf > convex_threshold) {
                return Err(Error::ThresholdViolation(format!("n = {n} must exceed -h/alpha = {convex_threshold}")));
            }
            (1.0 / an_h, Criterion::Francesi1, format!("alpha={alpha}, h={h}, n={n}"))
        }
        FrancesiVariant::Two => {
            let c = need(params.c, "c")?;
            let ell = need(params.ell, "ell")?;
            let r = need(params.radius, "radius")?;
            let d_r = (dim as f64 - 1.0) / r;
            let threshold = convex_threshold.max((d_r + 1.0 - ell) / c);
            if !(nf > threshold) {
                return Err(Error::ThresholdViolation(format!("n = {n} must exceed {threshold}")));
            }
            let c_r = need(params.c_r, "C_R")?;
            let v_r = match params.v_r {
                Some(s) => s,
                None => grid_sup(&ball_grid(dim, r, "V_R")?, |p| Ok(norm(&v.gradient(p)?)))?,
            };
            let u_r = match params.u_r {
                Some(s) => s,
                None => grid_sup(&ball_grid(u.dim(), r, "U_R")?, |p| Ok(norm(&u.gradient(p)?)))?,
            };
            let num = an_h + (c * nf + ell - d_r + nf * v_r + u_r) * c_r;
            let den = an_h * (c * nf + ell - 1.0 - d_r);
            let digest = format!(
                "alpha={alpha}, h={h}, n={n}, c={c}, ell={ell}, R={r}, C_R={c_r}, V_R={v_r}, U_R={u_r}, d_R={d_r}"
            );
            (num / den, Criterion::Francesi2, digest)
        }
        FrancesiVariant::Three => {
            let c1 = need(params.c1, "c1")?;
            let c2 = need(params.c2, "c2")?;
            let r = need(params.radius, "radius")?;
            let threshold = convex_threshold.max(1.0 + 1.0 / c2);
            if !(nf > threshold) {
                return Err(Error::ThresholdViolation(format!("n = {n} must exceed {threshold}")));
            }
            let v_r_star = match params.v_r_star {
                Some(s) => s,
                None => grid_sup(&ball_grid(dim, r, "V_R*")?, |p| Ok(v.laplacian(p)?.abs()))?,
            };
            let w_r = match params.w_r {
                Some(s) => s,
                None => grid_sup(&ball_grid(dim, r, "W_R")?, |p| {
                    Ok(norm(&u.gradient(p)?) * norm(&v.gradient(p)?))
                })?,
            };
            let omega_r = match params.omega_r {
                Some(s) => s,
                None => {
                    let sup = grid_sup(&ball_grid(dim, r, "omega_R")?, |p| Ok(v.value(p)))?;
                    // The global infimum is searched on B_{4R}.
                    let inf = -grid_sup(&ball_grid(dim, 4.0 * r, "omega_R")?, |p| Ok(-v.value(p)))?;
                    sup - inf
                }
            };
            let num = an_h + omega_r.exp() * (c1 * nf + v_r_star + w_r);
            let den = an_h * c1 * nf;
            let digest = format!(
                "alpha={alpha}, h={h}, n={n}, c1={c1}, c2={c2}, R={r}, V_R*={v_r_star}, W_R={w_r}, omega_R={omega_r}"
            );
            (num / den, Criterion::Francesi3, digest)
        }
    };
    if !(c_sq > 0.0) || !c_sq.is_finite() {
        return Err(Error::NumericalFailure(format!("{criterion} squared bound is {c_sq}")));
    }
    PoincareBound::new(c_sq.sqrt(), criterion, digest)
}
