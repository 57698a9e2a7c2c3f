//! Executes one command against a resolved configuration, entirely in memory.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use wellposed::bounds::{
    lipschitz_exch_n, lipschitz_expfam, lipschitz_expfam_bobkov, lipschitz_pareto, lipschitz_tv, lipschitz_w1,
    lipschitz_w2, lipschitz_w2_sobolev, maintrace_1d, poincare_audit, LipschitzCertificate, ParetoVariant,
    PriorDensity, W2Variant,
};
use wellposed::experiments::{
    contraction_experiment, ratio_sweep, ratio_sweep_grid, renyi_approx, wiener_uniformity,
};
use wellposed::measures::Distribution1D;
use wellposed::models::{build_model, Model1D, ModelSpec, PosteriorKernel, Prior, PriorSpec, RegisteredModel};
use wellposed::poincare::bound_muckenhoupt_1d;

use crate::config::{Command, PoincareTarget, RouteChoice, RunConfig};
use crate::error::{CliError, Context};

/// Version of every CSV layout written by the runner.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of a command before anything touches the filesystem.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub result: Value,
    pub csv: String,
    pub passed: bool,
    pub summary: String,
}

struct Setup {
    spec: ModelSpec,
    model: RegisteredModel,
    prior: Option<Prior>,
}

fn setup(cfg: &RunConfig) -> Result<Setup, CliError> {
    let spec = cfg.model.clone().ok_or(CliError::MissingKey { key: "model", context: "this command".into() })?;
    let model = build_model(&spec).context(|| format!("building model {}", spec.registry_name()))?;
    let prior_spec = cfg.prior.clone().or_else(|| default_prior(&spec));
    let prior = prior_spec.map(|p| Prior::from_spec(&p).context(|| "building prior".into())).transpose()?;
    Ok(Setup { spec, model, prior })
}

fn default_prior(spec: &ModelSpec) -> Option<PriorSpec> {
    match spec {
        ModelSpec::GaussianLocation { .. } => Some(PriorSpec::Normal { mean: 0.0, sd: 1.0 }),
        ModelSpec::Pareto1d { .. } | ModelSpec::ParetoMsample { .. } => Some(PriorSpec::Uniform { a: 1.0, b: 2.0 }),
        _ => None,
    }
}

impl Setup {
    fn prior(&self) -> Result<&Prior, CliError> {
        self.prior.as_ref().ok_or(CliError::MissingKey { key: "prior", context: self.spec.registry_name().into() })
    }

    fn model1d(&self) -> Result<Arc<dyn Model1D>, CliError> {
        self.model.as_model1d().ok_or_else(|| CliError::Config {
            origin: "model".into(),
            message: format!("{} has no one-dimensional posterior kernel", self.spec.registry_name()),
        })
    }

    fn kernel(&self) -> Result<PosteriorKernel, CliError> {
        Ok(PosteriorKernel::new(self.model1d()?, self.prior()?.clone()))
    }

    fn default_box(&self) -> Result<(f64, f64), CliError> {
        let b = self.model1d()?.data_box();
        match b.first() {
            Some(&(lo, hi)) if lo.is_finite() && hi.is_finite() => Ok((lo, hi)),
            _ => Err(CliError::MissingKey { key: "x_box", context: self.spec.registry_name().into() }),
        }
    }

    fn default_route(&self) -> Result<RouteChoice, CliError> {
        match self.model {
            RegisteredModel::ExpFamily(_) => Ok(RouteChoice::Expfam),
            RegisteredModel::Pareto(_) => Ok(RouteChoice::Pareto),
            RegisteredModel::ParetoSample(_) => Ok(RouteChoice::ParetoMsample),
            _ => Err(CliError::Config {
                origin: "model".into(),
                message: format!("{} has no certificate route", self.spec.registry_name()),
            }),
        }
    }

    /// Truncation point: the model's `θ₀`, else the upper end of the prior support.
    fn theta0(&self) -> Result<f64, CliError> {
        let from_model = match &self.model {
            RegisteredModel::Pareto(m) => m.theta0(),
            RegisteredModel::ParetoSample(m) => m.theta0(),
            _ => f64::INFINITY,
        };
        let t = from_model.min(self.prior()?.support().hi());
        if t.is_finite() {
            Ok(t)
        } else {
            Err(CliError::MissingKey { key: "model.theta0", context: "Pareto certificates".into() })
        }
    }
}

pub fn certify(cfg: &RunConfig) -> Result<LipschitzCertificate, CliError> {
    let s = setup(cfg)?;
    certify_with(cfg, &s)
}

fn certify_with(cfg: &RunConfig, s: &Setup) -> Result<LipschitzCertificate, CliError> {
    let c = &cfg.certify;
    let route = match c.route {
        Some(r) => r,
        None => s.default_route()?,
    };
    let x_box = match c.x_box {
        Some(b) => b,
        None => s.default_box()?,
    };
    let what = || format!("certifying {} via {route:?}", s.spec.registry_name());
    let expfam = || match &s.model {
        RegisteredModel::ExpFamily(m) => Ok(Arc::clone(m)),
        _ => Err(CliError::Config { origin: "certify.route".into(), message: format!("{route:?} needs an exponential family") }),
    };
    let cert = match route {
        RouteChoice::Expfam => lipschitz_expfam(&*expfam()?, s.prior()?).context(what)?,
        RouteChoice::ExpfamBobkov => lipschitz_expfam_bobkov(expfam()?, s.prior()?, x_box, c.grid).context(what)?,
        RouteChoice::ExchN => {
            let n = c.n.ok_or(CliError::MissingKey { key: "certify.n", context: "exch_n".into() })?;
            lipschitz_exch_n(&*expfam()?, s.prior()?, n).context(what)?
        }
        RouteChoice::Tv => lipschitz_tv(&s.kernel()?, x_box, c.grid).context(what)?,
        RouteChoice::W1 => {
            let prior_c = bound_muckenhoupt_1d(s.prior()?.distribution()).context(what)?.bound;
            lipschitz_w1(&s.kernel()?, &prior_c, c.w1_p, x_box, c.grid).context(what)?
        }
        RouteChoice::W2 => lipschitz_w2(&s.kernel()?, c.criterion, W2Variant::PoincareFisher, x_box, c.grid).context(what)?,
        RouteChoice::MixedScore => lipschitz_w2(&s.kernel()?, c.criterion, W2Variant::MixedScore, x_box, c.grid).context(what)?,
        RouteChoice::Sobolev => {
            let p = c.sobolev_p.ok_or(CliError::MissingKey { key: "certify.sobolev_p", context: "sobolev".into() })?;
            let s_p = c
                .sobolev_constant
                .ok_or(CliError::MissingKey { key: "certify.sobolev_constant", context: "sobolev".into() })?;
            lipschitz_w2_sobolev(&s.kernel()?, s_p, p, x_box, c.grid).context(what)?
        }
        RouteChoice::Pareto | RouteChoice::ParetoMsample => {
            let variant = match (&s.model, route) {
                (RegisteredModel::Pareto(_), RouteChoice::Pareto) => ParetoVariant::OneD,
                (RegisteredModel::ParetoSample(m), RouteChoice::ParetoMsample) => ParetoVariant::MSample { m: m.m() },
                _ => {
                    return Err(CliError::Config {
                        origin: "certify.route".into(),
                        message: format!("{route:?} does not match model {}", s.spec.registry_name()),
                    })
                }
            };
            let prior = s.prior()?.clone();
            let q = move |t: f64| prior.pdf(t);
            lipschitz_pareto(&variant, &q, s.theta0()?, x_box, c.grid).context(what)?
        }
        RouteChoice::Maintrace => {
            let prior = s.prior()?.clone();
            let q: PriorDensity = Arc::new(move |t: f64| prior.pdf(t));
            maintrace_1d(q, s.theta0()?, x_box, c.grid).context(what)?
        }
    };
    Ok(cert)
}

#[derive(Serialize)]
struct CertifyRow<'a> {
    schema_version: u32,
    route: &'a str,
    metric: &'a str,
    #[serde(rename = "L")]
    l: f64,
    x_lo: Option<f64>,
    x_hi: Option<f64>,
    grid: usize,
    argmax: Option<f64>,
}

#[derive(Serialize)]
struct PairRow {
    schema_version: u32,
    pair: usize,
    x1: f64,
    x2: f64,
    posterior_distance: f64,
    input_distance: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct ContractionCsvRow {
    schema_version: u32,
    n: usize,
    replication: usize,
    w1: Option<f64>,
}

#[derive(Serialize)]
struct RenyiRow {
    schema_version: u32,
    k_cells: usize,
    epsilon: f64,
    max_error: f64,
    bound: f64,
    argmax: f64,
}

#[derive(Serialize)]
struct WienerCsvRow {
    schema_version: u32,
    j: usize,
    constant: f64,
    argmax_x1: f64,
    argmax_x2: f64,
}

#[derive(Serialize)]
struct PoincareRow<'a> {
    schema_version: u32,
    target: &'a str,
    x: Option<f64>,
    criterion: &'a str,
    value: Option<f64>,
    oracle: f64,
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Serialize(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Serialize(e.to_string()))
}

fn cert_row(cert: &LipschitzCertificate) -> CertifyRow<'_> {
    let b = cert.x_box();
    CertifyRow {
        schema_version: SCHEMA_VERSION,
        route: cert.route.as_str(),
        metric: cert.metric.as_str(),
        l: cert.l,
        x_lo: b.map(|b| b.0),
        x_hi: b.map(|b| b.1),
        grid: cert.sup_domain.grid,
        argmax: cert.sup_domain.argmax,
    }
}

fn pair_rows(pairs: &[wellposed::experiments::PairRecord]) -> impl Iterator<Item = PairRow> + '_ {
    pairs.iter().enumerate().map(|(i, p)| PairRow {
        schema_version: SCHEMA_VERSION,
        pair: i,
        x1: p.x1,
        x2: p.x2,
        posterior_distance: p.posterior_distance,
        input_distance: p.input_distance,
        ratio: p.ratio,
    })
}

/// Runs `command` on `cfg`. A failed check is a successful run with `passed = false`.
pub fn run(command: Command, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let seed = cfg.seed();
    match command {
        Command::Certify => {
            let cert = certify(cfg)?;
            let summary = format!("{} L = {} ({})", cert.route, cert.l, cert.metric);
            Ok(RunOutput {
                csv: to_csv([cert_row(&cert)])?,
                result: json!({ "certificate": to_value(&cert)? }),
                passed: true,
                summary,
            })
        }
        Command::Verify => verify(cfg, seed),
        Command::Contraction => {
            let s = setup(cfg)?;
            let c = &cfg.contraction;
            let theta0 = c.theta0.ok_or(CliError::MissingKey { key: "contraction.theta0", context: "contraction".into() })?;
            let report = contraction_experiment(s.model1d()?, s.prior()?, theta0, &c.n_values, c.replications, seed)
                .context(|| "contraction experiment".into())?;
            let passed = c.slope_range.is_none_or(|(lo, hi)| (lo..=hi).contains(&report.slope));
            let summary = format!("slope = {:.4}, discarded = {}", report.slope, report.discarded);
            let csv = to_csv(report.rows.iter().map(|r| ContractionCsvRow {
                schema_version: SCHEMA_VERSION,
                n: r.n,
                replication: r.replication,
                w1: r.w1,
            }))?;
            Ok(RunOutput { result: json!({ "report": to_value(&report)?, "slope_range": c.slope_range }), csv, passed, summary })
        }
        Command::Renyi => {
            let s = setup(cfg)?;
            let r = &cfg.renyi;
            let kernel = s.kernel()?;
            let x_box = match r.x_box {
                Some(b) => b,
                None => s.default_box()?,
            };
            let (lipschitz, cert) = match r.lipschitz {
                Some(l) => (l, None),
                None => {
                    let cert = certify_with(cfg, &s)?;
                    (cert.l, Some(cert))
                }
            };
            let mut reports = Vec::new();
            for &k in &r.k_cells {
                reports.push(
                    renyi_approx(&kernel, x_box, k, r.probes, lipschitz, None)
                        .context(|| format!("cell averaging with k = {k}"))?,
                );
            }
            let passed = reports.iter().all(|r| r.within_bound());
            let halving: Vec<f64> = reports.windows(2).map(|w| w[1].max_error / w[0].max_error).collect();
            let summary = format!(
                "max errors {:?} vs bounds {:?}",
                reports.iter().map(|r| r.max_error).collect::<Vec<_>>(),
                reports.iter().map(|r| r.bound).collect::<Vec<_>>()
            );
            let csv = to_csv(reports.iter().map(|r| RenyiRow {
                schema_version: SCHEMA_VERSION,
                k_cells: r.k_cells,
                epsilon: r.epsilon,
                max_error: r.max_error,
                bound: r.bound,
                argmax: r.argmax,
            }))?;
            let result = json!({
                "lipschitz": lipschitz,
                "certificate": cert.map(|c| to_value(&c)).transpose()?,
                "x_box": x_box,
                "reports": to_value(&reports)?,
                "successive_error_ratios": halving,
            });
            Ok(RunOutput { result, csv, passed, summary })
        }
        Command::Wiener => {
            let w = &cfg.wiener;
            let report =
                wiener_uniformity(&w.j_values, &w.x_pairs, w.n_pairs, seed).context(|| "Wiener uniformity".into())?;
            let passed = report.spread <= w.max_spread;
            let summary = format!("spread = {:.4} (limit {})", report.spread, w.max_spread);
            let csv = to_csv(report.rows.iter().map(|r| WienerCsvRow {
                schema_version: SCHEMA_VERSION,
                j: r.j,
                constant: r.constant,
                argmax_x1: r.argmax.0,
                argmax_x2: r.argmax.1,
            }))?;
            Ok(RunOutput { result: json!({ "report": to_value(&report)?, "max_spread": w.max_spread }), csv, passed, summary })
        }
        Command::Poincare => poincare(cfg),
    }
}

fn verify(cfg: &RunConfig, seed: u64) -> Result<RunOutput, CliError> {
    let s = setup(cfg)?;
    let v = &cfg.verify;
    if let RegisteredModel::Pareto2Param(m) = &s.model {
        let x_box = v.x_box.unwrap_or((1.1, 2.0));
        let report = ratio_sweep_grid(m, x_box, v.n_pairs, seed).context(|| "grid ratio sweep".into())?;
        let spread = report.spread();
        let passed = report.pairs.iter().all(|p| p.ratio.is_finite()) && spread <= v.max_spread;
        let summary = format!("max ratio = {:.6}, max/median = {spread:.4}", report.max_ratio);
        let csv = to_csv(pair_rows(&report.pairs))?;
        let result = json!({ "report": to_value(&report)?, "spread": spread, "max_spread": v.max_spread });
        return Ok(RunOutput { result, csv, passed, summary });
    }
    let cert = certify_with(cfg, &s)?;
    let x_box = match v.x_box.or(cfg.certify.x_box) {
        Some(b) => b,
        None => s.default_box()?,
    };
    let report = ratio_sweep(&s.kernel()?, &cert, Some(x_box), v.n_pairs, seed).context(|| "ratio sweep".into())?;
    let summary = format!("max ratio = {:.9} vs L = {}", report.max_ratio, cert.l);
    let csv = to_csv(pair_rows(&report.pairs))?;
    Ok(RunOutput { result: json!({ "report": to_value(&report)? }), csv, passed: report.passed, summary })
}

fn poincare(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let p = &cfg.poincare;
    let mut targets: Vec<(Option<f64>, Distribution1D)> = Vec::new();
    match p.target {
        PoincareTarget::Prior => {
            let spec = cfg.prior.clone().ok_or(CliError::MissingKey { key: "prior", context: "poincare".into() })?;
            let prior = Prior::from_spec(&spec).context(|| "building prior".into())?;
            targets.push((None, prior.distribution().clone()));
        }
        PoincareTarget::Posterior => {
            let kernel = setup(cfg)?.kernel()?;
            for &x in &p.x {
                targets.push((Some(x), kernel.posterior(&[x]).context(|| format!("posterior at x = {x}"))?));
            }
        }
    }
    let target = match p.target {
        PoincareTarget::Prior => "prior",
        PoincareTarget::Posterior => "posterior",
    };
    let mut audits = Vec::new();
    let mut rows = Vec::new();
    let mut passed = true;
    for (x, d) in &targets {
        let audit = poincare_audit(d, p.oracle_grid).context(|| "Poincaré audit".into())?;
        passed &= audit.violations(p.tolerance).is_empty();
        for e in &audit.entries {
            rows.push(PoincareRow {
                schema_version: SCHEMA_VERSION,
                target,
                x: *x,
                criterion: e.criterion.as_str(),
                value: e.value,
                oracle: audit.oracle,
            });
        }
        audits.push(json!({ "x": x, "audit": to_value(&audit)? }));
    }
    let summary = format!("{} target(s), all bounds above oracle - {}: {passed}", targets.len(), p.tolerance);
    Ok(RunOutput { csv: to_csv(rows)?, result: json!({ "target": target, "audits": audits }), passed, summary })
}
