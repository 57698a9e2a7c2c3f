//! One-dimensional measures given by a (possibly unnormalised) log-density.
//!
//! At construction the effective mass window is located, split into uniform
//! panels, and the density is sampled at Gauss–Legendre nodes on each panel.
//! Per-panel Legendre expansions of the sampled density give the CDF and its
//! inverse without further density evaluations.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::RngCore;

use super::rng::{open_unit, seeded_rng};
use crate::error::{Error, Result};
use crate::numerics::{golden_max, GaussLegendre, Interval};

pub type LogDensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const PANELS: usize = 256;
const ORDER: usize = 16;
/// Log-density drop from the mode that delimits the mass window.
const TAIL_DROP: f64 = 40.0;

/// Order of the Gauss–Legendre rule behind [`Distribution1D::quantile_table`].
pub const QUANTILE_NODES: usize = 4096;
/// Quantile levels are clipped to `(QUANTILE_CLIP, 1 - QUANTILE_CLIP)`.
pub const QUANTILE_CLIP: f64 = 1e-9;

struct PanelBasis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    // legendre[j][i] = P_j(t_i)
    legendre: Vec<[f64; ORDER]>,
}

fn panel_basis() -> &'static PanelBasis {
    static BASIS: OnceLock<PanelBasis> = OnceLock::new();
    BASIS.get_or_init(|| {
        let gl = GaussLegendre::new(ORDER);
        let mut legendre = vec![[0.0; ORDER]; ORDER];
        for (i, &t) in gl.nodes().iter().enumerate() {
            let p = legendre_values(t);
            for j in 0..ORDER {
                legendre[j][i] = p[j];
            }
        }
        PanelBasis { nodes: gl.nodes().to_vec(), weights: gl.weights().to_vec(), legendre }
    })
}

/// `P_0(t) ..= P_ORDER(t)`.
fn legendre_values(t: f64) -> [f64; ORDER + 1] {
    let mut p = [0.0; ORDER + 1];
    p[0] = 1.0;
    p[1] = t;
    for j in 1..ORDER {
        let jf = j as f64;
        p[j + 1] = ((2.0 * jf + 1.0) * t * p[j] - jf * p[j - 1]) / (jf + 1.0);
    }
    p
}

/// Quantile levels and weights of the fixed rule on the clipped unit interval.
pub fn quantile_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::cached(QUANTILE_NODES);
        gl.mapped(QUANTILE_CLIP, 1.0 - QUANTILE_CLIP).unzip()
    })
}

struct Inner {
    log_density: LogDensityFn,
    support: Interval,
    lo: f64,
    hi: f64,
    width: f64,
    log_norm: f64,
    /// Abscissae and probability masses of all panel nodes.
    xs: Vec<f64>,
    masses: Vec<f64>,
    /// Legendre coefficients of the panel mass density in the local coordinate.
    coeffs: Vec<[f64; ORDER]>,
    panel_mass: Vec<f64>,
    /// `cdf_left[k]` is the mass left of panel `k`, `surv_right[k]` the mass from panel `k` on.
    cdf_left: Vec<f64>,
    surv_right: Vec<f64>,
    quantiles: OnceLock<Vec<f64>>,
}

/// A probability measure on an interval, immutable and cheap to clone.
#[derive(Clone)]
pub struct Distribution1D {
    inner: Arc<Inner>,
}

impl fmt::Debug for Distribution1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Distribution1D")
            .field("support", &self.inner.support)
            .field("window", &(self.inner.lo, self.inner.hi))
            .field("log_norm", &self.inner.log_norm)
            .finish()
    }
}

/// Location and scale guess used to seed the window search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hint {
    pub center: f64,
    pub scale: f64,
}

impl Distribution1D {
    /// Builds from an unnormalised log-density; the window is found by search.
    pub fn from_log_density<F>(log_density: F, support: Interval) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Arc::new(log_density), support, None)
    }

    /// As [`Self::from_log_density`], seeding the search near `hint`.
    pub fn from_log_density_hint<F>(log_density: F, support: Interval, hint: Hint) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Arc::new(log_density), support, Some(hint))
    }

    /// Builds from an unnormalised density.
    pub fn from_density<F>(density: F, support: Interval) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_log_density(move |x| density(x).ln(), support)
    }

    /// Uses an explicit mass window `[lo, hi]` inside the closure of `support`.
    pub fn from_log_density_window(log_density: LogDensityFn, support: Interval, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() || lo < support.lo() || hi > support.hi() {
            return Err(Error::InvalidInput(format!("window [{lo}, {hi}] not inside {support}")));
        }
        Self::tabulate(log_density, support, lo, hi, f64::NEG_INFINITY)
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !mean.is_finite() || !sd.is_finite() {
            return Err(Error::InvalidInput(format!("normal needs finite mean and sd > 0, got ({mean}, {sd})")));
        }
        let hint = Hint { center: mean, scale: sd };
        Self::from_log_density_hint(move |x| -0.5 * ((x - mean) / sd).powi(2), Interval::real_line(), hint)
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let support = Interval::new(a, b)?;
        if !support.is_bounded() {
            return Err(Error::InvalidInput("uniform needs a bounded interval".into()));
        }
        Self::from_log_density_window(Arc::new(|_| 0.0), support, a, b)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidInput(format!("exponential rate must be positive, got {rate}")));
        }
        let hint = Hint { center: 0.0, scale: 1.0 / rate };
        Self::from_log_density_hint(move |x| -rate * x, Interval::positive_half_line(), hint)
    }

    /// Exponential law restricted to `(a, b)`.
    pub fn truncated_exponential(rate: f64, a: f64, b: f64) -> Result<Self> {
        let support = Interval::new(a, b)?;
        if !rate.is_finite() {
            return Err(Error::InvalidInput(format!("rate must be finite, got {rate}")));
        }
        let hint = Hint { center: a.max(-1e300), scale: if rate > 0.0 { 1.0 / rate } else { 1.0 } };
        Self::from_log_density_hint(move |x| -rate * x, support, hint)
    }

    /// Finite mixture `sum_j w_j d_j`; weights are normalised.
    pub fn mixture(components: &[(f64, Distribution1D)]) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if components.is_empty() || components.iter().any(|(w, _)| !(*w >= 0.0)) || !(total > 0.0) {
            return Err(Error::InvalidInput("mixture weights must be nonnegative with positive sum".into()));
        }
        let parts: Vec<(f64, Distribution1D)> = components
            .iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, d)| ((w / total).ln(), d.clone()))
            .collect();
        if parts.len() == 1 {
            return Ok(parts[0].1.clone());
        }
        let lo = parts.iter().map(|(_, d)| d.inner.lo).fold(f64::INFINITY, f64::min);
        let hi = parts.iter().map(|(_, d)| d.inner.hi).fold(f64::NEG_INFINITY, f64::max);
        let slo = parts.iter().map(|(_, d)| d.support().lo()).fold(f64::INFINITY, f64::min);
        let shi = parts.iter().map(|(_, d)| d.support().hi()).fold(f64::NEG_INFINITY, f64::max);
        let support = Interval::new(slo, shi)?;
        let log_density: LogDensityFn = Arc::new(move |x| {
            let terms: Vec<f64> = parts.iter().map(|(lw, d)| lw + d.log_pdf(x)).collect();
            log_sum_exp(&terms)
        });
        Self::tabulate(log_density, support, lo, hi, f64::NEG_INFINITY)
    }

    /// Law of `scale * X + shift` for `X` with this distribution.
    pub fn affine_pushforward(&self, scale: f64, shift: f64) -> Result<Self> {
        if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidInput("affine map needs a finite nonzero scale".into()));
        }
        let map = |x: f64| scale * x + shift;
        let (s0, s1) = (map(self.support().lo()), map(self.support().hi()));
        let support = Interval::new(s0.min(s1), s0.max(s1))?;
        let (w0, w1) = (map(self.inner.lo), map(self.inner.hi));
        let base = self.clone();
        let log_jac = scale.abs().ln();
        let log_density: LogDensityFn = Arc::new(move |y| base.log_pdf((y - shift) / scale) - log_jac);
        Self::tabulate(log_density, support, w0.min(w1), w0.max(w1), f64::NEG_INFINITY)
    }

    fn build(log_density: LogDensityFn, support: Interval, hint: Option<Hint>) -> Result<Self> {
        let f = |x: f64| {
            let v = log_density(x);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        };
        let (mode, peak) = locate_mode(&f, support, hint)?;
        let level = peak - TAIL_DROP;
        let scale = hint.map(|h| h.scale).filter(|s| *s > 0.0 && s.is_finite()).unwrap_or(1e-3 * mode.abs().max(1.0));
        let lo = window_end(&f, support, mode, -1.0, scale, level)?;
        let hi = window_end(&f, support, mode, 1.0, scale, level)?;
        if !(hi > lo) {
            return Err(Error::Degenerate(format!("mass window around {mode} has zero width")));
        }
        Self::tabulate(log_density, support, lo, hi, peak)
    }

    fn tabulate(log_density: LogDensityFn, support: Interval, lo: f64, hi: f64, peak: f64) -> Result<Self> {
        let basis = panel_basis();
        let width = (hi - lo) / PANELS as f64;
        let mut xs = Vec::with_capacity(PANELS * ORDER);
        let mut lf = Vec::with_capacity(PANELS * ORDER);
        for k in 0..PANELS {
            let left = lo + k as f64 * width;
            for &t in &basis.nodes {
                let x = left + 0.5 * width * (1.0 + t);
                let v = log_density(x);
                if v.is_nan() || v == f64::INFINITY {
                    return Err(Error::NonFinite { at: x, value: v });
                }
                xs.push(x);
                lf.push(v);
            }
        }
        let top = lf.iter().copied().fold(peak, f64::max);
        if !top.is_finite() {
            return Err(Error::Degenerate("density vanishes on the mass window".into()));
        }
        let mut masses: Vec<f64> = lf
            .iter()
            .enumerate()
            .map(|(i, &v)| 0.5 * width * basis.weights[i % ORDER] * (v - top).exp())
            .collect();
        let total = compensated_sum(masses.iter().copied());
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Degenerate("density has no mass on the window".into()));
        }
        masses.iter_mut().for_each(|m| *m /= total);
        let log_norm = top + total.ln();

        let mut coeffs = Vec::with_capacity(PANELS);
        let mut panel_mass = Vec::with_capacity(PANELS);
        for k in 0..PANELS {
            let block = &masses[k * ORDER..(k + 1) * ORDER];
            // masses are w_i q(t_i); c_j = (2j+1)/2 sum_i w_i q(t_i) P_j(t_i)
            let mut c = [0.0; ORDER];
            for (j, cj) in c.iter_mut().enumerate() {
                let s: f64 = block.iter().zip(&basis.legendre[j]).map(|(m, p)| m * p).sum();
                *cj = 0.5 * (2.0 * j as f64 + 1.0) * s;
            }
            coeffs.push(c);
            panel_mass.push(compensated_sum(block.iter().copied()));
        }
        let mut cdf_left = vec![0.0; PANELS + 1];
        for k in 0..PANELS {
            cdf_left[k + 1] = compensated_sum(panel_mass[..=k].iter().copied());
        }
        let mut surv_right = vec![0.0; PANELS + 1];
        for k in (0..PANELS).rev() {
            surv_right[k] = compensated_sum(panel_mass[k..].iter().copied());
        }
        Ok(Self {
            inner: Arc::new(Inner {
                log_density,
                support,
                lo,
                hi,
                width,
                log_norm,
                xs,
                masses,
                coeffs,
                panel_mass,
                cdf_left,
                surv_right,
                quantiles: OnceLock::new(),
            }),
        })
    }

    pub fn support(&self) -> Interval {
        self.inner.support
    }

    /// Interval carrying all but a negligible fraction of the mass.
    pub fn window(&self) -> (f64, f64) {
        (self.inner.lo, self.inner.hi)
    }

    /// Log of the normalising constant of the log-density supplied at construction.
    pub fn log_normalizer(&self) -> f64 {
        self.inner.log_norm
    }

    pub fn normalizer(&self) -> f64 {
        self.inner.log_norm.exp()
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        if !self.inner.support.contains_closed(x) {
            return f64::NEG_INFINITY;
        }
        let v = (self.inner.log_density)(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v - self.inner.log_norm
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    /// Unnormalised log-density as supplied.
    pub fn log_density_fn(&self) -> &LogDensityFn {
        &self.inner.log_density
    }

    /// Panel nodes and their probability masses; a quadrature rule for this measure.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.inner.xs.iter().copied().zip(self.inner.masses.iter().copied())
    }

    /// `∫ g dμ` on the panel rule.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.nodes().map(|(x, m)| if m > 0.0 { m * g(x) } else { 0.0 }).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    /// Mean and variance.
    pub fn mean_variance(&self) -> (f64, f64) {
        let mean = self.mean();
        (mean, self.expect(|x| (x - mean) * (x - mean)))
    }

    pub fn variance(&self) -> f64 {
        self.mean_variance().1
    }

    /// `∫ |θ - c| dμ(θ)`, with the panel holding `c` split at `c`.
    pub fn abs_moment_about(&self, c: f64) -> f64 {
        let inner = &*self.inner;
        if c <= inner.lo {
            return self.mean() - c;
        }
        if c >= inner.hi {
            return c - self.mean();
        }
        let k = self.panel_of(c);
        let mut total = 0.0;
        for (i, (x, m)) in self.nodes().enumerate() {
            if i / ORDER != k {
                total += m * (x - c).abs();
            }
        }
        let left = inner.lo + k as f64 * inner.width;
        let right = left + inner.width;
        let gl = GaussLegendre::cached(ORDER);
        let piece = |a: f64, b: f64| -> f64 {
            gl.mapped(a, b).map(|(x, w)| w * (x - c).abs() * self.pdf(x)).sum::<f64>()
        };
        total + piece(left, c) + piece(c, right)
    }

    /// `∫_a^b g dμ`, exact panel rule on whole panels and Gauss–Legendre on the cut ones.
    pub fn expect_between<G: Fn(f64) -> f64>(&self, g: G, a: f64, b: f64) -> f64 {
        let inner = &*self.inner;
        let (a, b) = (a.max(inner.lo), b.min(inner.hi));
        if !(b > a) {
            return 0.0;
        }
        let gl = GaussLegendre::cached(ORDER);
        let piece = |x0: f64, x1: f64| -> f64 {
            if x1 > x0 {
                gl.mapped(x0, x1).map(|(x, w)| w * g(x) * self.pdf(x)).sum::<f64>()
            } else {
                0.0
            }
        };
        let (ka, kb) = (self.panel_of(a), self.panel_of(b));
        if ka == kb {
            return piece(a, b);
        }
        let edge = |k: usize| inner.lo + k as f64 * inner.width;
        let mut total = piece(a, edge(ka + 1)) + piece(edge(kb), b);
        for k in ka + 1..kb {
            for i in k * ORDER..(k + 1) * ORDER {
                if inner.masses[i] > 0.0 {
                    total += inner.masses[i] * g(inner.xs[i]);
                }
            }
        }
        total
    }

    fn panel_of(&self, x: f64) -> usize {
        let k = ((x - self.inner.lo) / self.inner.width).floor();
        (k.max(0.0) as usize).min(PANELS - 1)
    }

    /// Mass of panel `k` left of local coordinate `t`.
    fn partial_left(&self, k: usize, t: f64) -> f64 {
        let c = &self.inner.coeffs[k];
        let p = legendre_values(t);
        let mut s = c[0] * (t + 1.0);
        for j in 1..ORDER {
            s += c[j] * (p[j + 1] - p[j - 1]) / (2.0 * j as f64 + 1.0);
        }
        s
    }

    /// Mass of panel `k` right of local coordinate `t`.
    fn partial_right(&self, k: usize, t: f64) -> f64 {
        let c = &self.inner.coeffs[k];
        let p = legendre_values(t);
        let mut s = c[0] * (1.0 - t);
        for j in 1..ORDER {
            s -= c[j] * (p[j + 1] - p[j - 1]) / (2.0 * j as f64 + 1.0);
        }
        s
    }

    fn local_density(&self, k: usize, t: f64) -> f64 {
        let c = &self.inner.coeffs[k];
        let p = legendre_values(t);
        c.iter().zip(&p).map(|(a, b)| a * b).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let inner = &*self.inner;
        if x <= inner.lo {
            return 0.0;
        }
        if x >= inner.hi {
            return 1.0;
        }
        let k = self.panel_of(x);
        let t = (2.0 * (x - inner.lo - k as f64 * inner.width) / inner.width - 1.0).clamp(-1.0, 1.0);
        let v = if inner.cdf_left[k] <= 0.5 {
            inner.cdf_left[k] + self.partial_left(k, t)
        } else {
            1.0 - (inner.surv_right[k + 1] + self.partial_right(k, t))
        };
        v.clamp(0.0, 1.0)
    }

    /// `1 - cdf(x)`, accurate in the right tail.
    pub fn survival(&self, x: f64) -> f64 {
        let inner = &*self.inner;
        if x <= inner.lo {
            return 1.0;
        }
        if x >= inner.hi {
            return 0.0;
        }
        let k = self.panel_of(x);
        let t = (2.0 * (x - inner.lo - k as f64 * inner.width) / inner.width - 1.0).clamp(-1.0, 1.0);
        let v = if inner.cdf_left[k] <= 0.5 {
            1.0 - (inner.cdf_left[k] + self.partial_left(k, t))
        } else {
            inner.surv_right[k + 1] + self.partial_right(k, t)
        };
        v.clamp(0.0, 1.0)
    }

    /// Generalised inverse of the CDF for `u` in `(0, 1)`; values outside are clamped
    /// to the mass window ends.
    pub fn quantile(&self, u: f64) -> f64 {
        let inner = &*self.inner;
        if !(u > 0.0) {
            return inner.lo;
        }
        if !(u < 1.0) {
            return inner.hi;
        }
        let from_left = u <= 0.5;
        let k = if from_left {
            let pos = inner.cdf_left.partition_point(|&c| c <= u);
            pos.saturating_sub(1).min(PANELS - 1)
        } else {
            let s = 1.0 - u;
            // first k with surv_right[k+1] <= s
            let pos = inner.surv_right.partition_point(|&c| c > s);
            pos.saturating_sub(1).min(PANELS - 1)
        };
        let target = if from_left { u - inner.cdf_left[k] } else { (1.0 - u) - inner.surv_right[k + 1] };
        let mass = inner.panel_mass[k];
        let residual = |t: f64| -> f64 {
            if from_left {
                self.partial_left(k, t) - target
            } else {
                target - self.partial_right(k, t)
            }
        };
        let (mut a, mut b) = (-1.0_f64, 1.0_f64);
        let frac = if mass > 0.0 { (if from_left { target } else { mass - target }) / mass } else { 0.5 };
        let mut t = (2.0 * frac - 1.0).clamp(-1.0, 1.0);
        for _ in 0..80 {
            let r = residual(t);
            if r == 0.0 {
                break;
            }
            if r < 0.0 {
                a = t;
            } else {
                b = t;
            }
            let d = self.local_density(k, t);
            let mut next = if d > 0.0 { t - r / d } else { f64::NAN };
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            let done = (next - t).abs() <= 4.0 * f64::EPSILON;
            t = next;
            if done || b - a <= 4.0 * f64::EPSILON {
                break;
            }
        }
        let left = inner.lo + k as f64 * inner.width;
        (left + 0.5 * inner.width * (1.0 + t)).clamp(inner.lo, inner.hi)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Quantiles at the nodes of [`quantile_rule`], computed once.
    pub fn quantile_table(&self) -> &[f64] {
        self.inner.quantiles.get_or_init(|| quantile_rule().0.iter().map(|&u| self.quantile(u)).collect())
    }

    /// `n` inverse-CDF draws, reproducible from `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = seeded_rng(seed);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: RngCore + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile(open_unit(rng))).collect()
    }
}

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m == f64::INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn locate_mode<F: Fn(f64) -> f64>(f: &F, support: Interval, hint: Option<Hint>) -> Result<(f64, f64)> {
    let mut probes: Vec<f64> = Vec::new();
    if let Some(h) = hint {
        probes.push(h.center);
        for k in -6..=12 {
            let s = h.scale * 2f64.powi(k);
            probes.push(h.center + s);
            probes.push(h.center - s);
        }
    }
    if support.is_bounded() {
        let n = 129;
        for i in 0..n {
            probes.push(support.lo() + support.width() * (i as f64 + 0.5) / n as f64);
        }
    } else {
        let anchor = match (support.lo().is_finite(), support.hi().is_finite()) {
            (true, false) => support.lo(),
            (false, true) => support.hi(),
            _ => 0.0,
        };
        probes.push(anchor);
        for k in -12..=40 {
            let s = 2f64.powi(k);
            probes.push(anchor + s);
            probes.push(anchor - s);
        }
    }
    probes.retain(|x| support.contains(*x));
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    let values: Vec<f64> = probes.iter().map(|&x| f(x)).collect();
    let (best, &peak) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Degenerate("no probe point inside the support".into()))?;
    if !(peak > f64::NEG_INFINITY) {
        return Err(Error::Degenerate("density vanishes at every probe point".into()));
    }
    if peak == f64::INFINITY {
        return Err(Error::NonFinite { at: probes[best], value: peak });
    }
    let a = if best > 0 { probes[best - 1] } else { support.lo().max(probes[best] - 1.0) };
    let b = if best + 1 < probes.len() { probes[best + 1] } else { support.hi().min(probes[best] + 1.0) };
    let (x, fx) = golden_max(f, a, b, 1e-13);
    if fx > peak && support.contains(x) {
        Ok((x, fx))
    } else {
        Ok((probes[best], peak))
    }
}

/// Where the log-density first drops below `level` walking from `mode` in direction `dir`.
fn window_end<F: Fn(f64) -> f64>(f: &F, support: Interval, mode: f64, dir: f64, scale: f64, level: f64) -> Result<f64> {
    let end = if dir > 0.0 { support.hi() } else { support.lo() };
    let mut inside = mode;
    let mut step = scale;
    for _ in 0..2100 {
        let mut x = mode + dir * step;
        let at_end = if dir > 0.0 { x >= end } else { x <= end };
        if at_end {
            x = end;
        }
        let fx = if at_end { f(end) } else { f(x) };
        if fx >= level && !at_end {
            inside = x;
            step *= 2.0;
            if !step.is_finite() {
                break;
            }
            continue;
        }
        if at_end && fx >= level {
            return Ok(end);
        }
        let (mut a, mut b) = (inside, x);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            if f(m) >= level {
                a = m;
            } else {
                b = m;
            }
        }
        // at an end the density may just vanish there; keep the end itself
        if at_end && (b - end).abs() <= 1e-12 * (1.0 + end.abs()) {
            return Ok(end);
        }
        return Ok(b);
    }
    Err(Error::NonIntegrable(format!("log-density does not decay towards {}", if dir > 0.0 { "+inf" } else { "-inf" })))
}
