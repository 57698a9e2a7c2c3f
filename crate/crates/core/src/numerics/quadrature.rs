//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Unbounded intervals are mapped onto finite ones before subdivision:
//! `θ = t/(1-t²)` on `(-1, 1)` for the whole line and `θ = lo + t/(1-t)` on
//! `(0, 1)` for a half line (mirrored for `(-∞, hi)`).

use super::Interval;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, max_subdivisions: 200 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::InvalidInput(
                "quadrature tolerances must be positive and max_subdivisions >= 1".into(),
            ));
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions })
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn eval_checked<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: t, value: v })
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_checked(f, center)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval_checked(f, center - dx)?;
        let f2 = eval_checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { a, b, value, error })
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let mut segs = vec![kronrod15(f, a, b)?];
    let mut evaluations = 15;
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(Integral { value, error, evaluations });
        }
        if segs.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergent(format!(
                "quadrature on ({a}, {b}) exhausted {} subdivisions, estimate {value:e} +- {error:e}",
                spec.max_subdivisions
            )));
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let s = segs[worst];
        let mid = 0.5 * (s.a + s.b);
        if !(mid > s.a && mid < s.b) || (s.b - s.a) <= 1e3 * f64::EPSILON * (s.a.abs() + s.b.abs()) {
            return Err(Error::NonConvergent(format!(
                "quadrature on ({a}, {b}) hit round-off near {mid}, estimate {value:e} +- {error:e}"
            )));
        }
        segs[worst] = kronrod15(f, s.a, mid)?;
        segs.push(kronrod15(f, mid, s.b)?);
        evaluations += 30;
    }
}

/// Integrates `f` over `domain`, mapping infinite ends as described in the module docs.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Interval, spec: &QuadratureSpec) -> Result<Integral> {
    let (lo, hi) = (domain.lo(), domain.hi());
    let mapped = |x: f64, jac: f64| -> f64 {
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    let out = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => adaptive(&|x| f(x), lo, hi, spec),
        (false, false) => adaptive(
            &|t: f64| {
                let d = 1.0 - t * t;
                mapped(t / d, (1.0 + t * t) / (d * d))
            },
            -1.0,
            1.0,
            spec,
        ),
        (true, false) => adaptive(
            &|t: f64| {
                let d = 1.0 - t;
                mapped(lo + t / d, 1.0 / (d * d))
            },
            0.0,
            1.0,
            spec,
        ),
        (false, true) => adaptive(
            &|t: f64| {
                let d = 1.0 - t;
                mapped(hi - t / d, 1.0 / (d * d))
            },
            0.0,
            1.0,
            spec,
        ),
    };
    out.map_err(|e| match e {
        // Report failures in the original coordinate.
        Error::NonFinite { at, value } => {
            let x = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => at,
                (false, false) => at / (1.0 - at * at),
                (true, false) => lo + at / (1.0 - at),
                (false, true) => hi - at / (1.0 - at),
            };
            Error::NonFinite { at: x, value }
        }
        other => other,
    })
}

/// Integrates over `(lo, hi)` split at the interior `breaks`, which need not be sorted.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    domain: Interval,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&b| domain.contains(b)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(domain.lo());
    edges.extend(pts);
    edges.push(domain.hi());
    let mut total = Integral { value: 0.0, error: 0.0, evaluations: 0 };
    for w in edges.windows(2) {
        let piece = integrate(&f, Interval::new(w[0], w[1])?, spec)?;
        total.value += piece.value;
        total.error += piece.error;
        total.evaluations += piece.evaluations;
    }
    Ok(total)
}

/// Default-spec integral value over `(lo, hi)`.
pub fn quad<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    Ok(integrate(f, Interval::new(lo, hi)?, &QuadratureSpec::default())?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn constant_on_unit_interval() {
        let r = integrate(|_| 1.0, Interval::new(0.0, 1.0).unwrap(), &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_normalization_on_real_line() {
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let r = integrate(phi, Interval::real_line(), &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn gamma_two_mean_on_half_line() {
        let r = integrate(|x: f64| x * (-x).exp(), Interval::positive_half_line(), &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn left_half_line() {
        let r = integrate(|x: f64| x.exp(), Interval::new(f64::NEG_INFINITY, 0.0).unwrap(), &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn nan_is_reported() {
        let e = integrate(|x: f64| if x > 0.5 { f64::NAN } else { 1.0 }, Interval::new(0.0, 1.0).unwrap(), &spec());
        assert!(matches!(e, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn exhausted_subdivisions() {
        let tight = QuadratureSpec::new(1e-14, 1e-14, 3).unwrap();
        let e = integrate(|x: f64| (1.0 / x).sin(), Interval::new(1e-4, 1.0).unwrap(), &tight);
        assert!(matches!(e, Err(Error::NonConvergent(_))));
    }

    #[test]
    fn split_handles_kinks() {
        let r = integrate_split(|x: f64| (x - 0.3).abs(), Interval::new(0.0, 1.0).unwrap(), &[0.3], &spec()).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn invalid_spec_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-8, 10).is_err());
        assert!(QuadratureSpec::new(1e-8, 1e-8, 0).is_err());
    }
}
