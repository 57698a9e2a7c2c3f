use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expfam::ExpFamilyModel;
use super::model::Model1D;
use super::pareto::{ParetoModel, ParetoSampleModel};
use super::pareto2d::{GridMode, Pareto2Param};
use crate::error::{Error, Result};
use crate::numerics::{integrate_split, QuadratureSpec};

pub const MODEL_NAMES: [&str; 6] =
    ["gaussian_location", "pareto_1d", "pareto_msample", "pareto_2param", "expfam_custom", "wiener_j"];

fn one() -> f64 {
    1.0
}

fn default_resolution() -> usize {
    64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpFamilyKind {
    Gaussian,
    ExponentialRate,
}

/// Serializable model selection, keyed by registry name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
pub enum ModelSpec {
    #[serde(rename = "gaussian_location")]
    GaussianLocation {
        #[serde(default = "one")]
        sigma: f64,
    },
    #[serde(rename = "pareto_1d")]
    Pareto1d {
        #[serde(default)]
        theta0: Option<f64>,
    },
    #[serde(rename = "pareto_msample")]
    ParetoMsample {
        m: usize,
        #[serde(default)]
        theta0: Option<f64>,
    },
    #[serde(rename = "pareto_2param")]
    Pareto2param {
        #[serde(default = "default_resolution")]
        resolution: usize,
        #[serde(default)]
        mode: GridMode,
    },
    #[serde(rename = "expfam_custom")]
    ExpfamCustom {
        family: ExpFamilyKind,
        #[serde(default)]
        sigma: Option<f64>,
    },
    #[serde(rename = "wiener_j")]
    WienerJ { j: usize },
}

impl ModelSpec {
    pub fn registry_name(&self) -> &'static str {
        match self {
            ModelSpec::GaussianLocation { .. } => "gaussian_location",
            ModelSpec::Pareto1d { .. } => "pareto_1d",
            ModelSpec::ParetoMsample { .. } => "pareto_msample",
            ModelSpec::Pareto2param { .. } => "pareto_2param",
            ModelSpec::ExpfamCustom { .. } => "expfam_custom",
            ModelSpec::WienerJ { .. } => "wiener_j",
        }
    }

    /// A spec with default parameters for a registry name.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "gaussian_location" => ModelSpec::GaussianLocation { sigma: 1.0 },
            "pareto_1d" => ModelSpec::Pareto1d { theta0: None },
            "pareto_msample" => ModelSpec::ParetoMsample { m: 2, theta0: None },
            "pareto_2param" => ModelSpec::Pareto2param { resolution: 64, mode: GridMode::Pullback },
            "expfam_custom" => ModelSpec::ExpfamCustom { family: ExpFamilyKind::ExponentialRate, sigma: None },
            "wiener_j" => ModelSpec::WienerJ { j: 8 },
            other => return Err(Error::InvalidInput(format!("unknown model `{other}`; known: {}", MODEL_NAMES.join(", ")))),
        })
    }
}

/// A constructed model. One-dimensional-parameter models also expose [`Model1D`].
#[derive(Clone)]
pub enum RegisteredModel {
    ExpFamily(Arc<ExpFamilyModel>),
    Pareto(Arc<ParetoModel>),
    ParetoSample(Arc<ParetoSampleModel>),
    Pareto2Param(Pareto2Param),
    Wiener { j: usize },
}

impl std::fmt::Debug for RegisteredModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegisteredModel::ExpFamily(m) => write!(f, "ExpFamily({})", m.name()),
            RegisteredModel::Pareto(m) => write!(f, "{m:?}"),
            RegisteredModel::ParetoSample(m) => write!(f, "{m:?}"),
            RegisteredModel::Pareto2Param(m) => write!(f, "{m:?}"),
            RegisteredModel::Wiener { j } => write!(f, "Wiener {{ j: {j} }}"),
        }
    }
}

impl RegisteredModel {
    pub fn as_model1d(&self) -> Option<Arc<dyn Model1D>> {
        match self {
            RegisteredModel::ExpFamily(m) => Some(m.clone() as Arc<dyn Model1D>),
            RegisteredModel::Pareto(m) => Some(m.clone() as Arc<dyn Model1D>),
            RegisteredModel::ParetoSample(m) => Some(m.clone() as Arc<dyn Model1D>),
            _ => None,
        }
    }
}

/// Builds a model and, for one-dimensional data, checks that the likelihood
/// integrates to one over the data space at a few parameter values.
pub fn build_model(spec: &ModelSpec) -> Result<RegisteredModel> {
    let model = match *spec {
        ModelSpec::GaussianLocation { sigma } => RegisteredModel::ExpFamily(Arc::new(ExpFamilyModel::gaussian(sigma)?)),
        ModelSpec::Pareto1d { theta0 } => {
            RegisteredModel::Pareto(Arc::new(ParetoModel::new(theta0.unwrap_or(f64::INFINITY))?))
        }
        ModelSpec::ParetoMsample { m, theta0 } => {
            RegisteredModel::ParetoSample(Arc::new(ParetoSampleModel::new(m, theta0.unwrap_or(f64::INFINITY))?))
        }
        ModelSpec::Pareto2param { resolution, mode } => {
            RegisteredModel::Pareto2Param(Pareto2Param::uniform(resolution, mode)?)
        }
        ModelSpec::ExpfamCustom { family, sigma } => {
            let m = match family {
                ExpFamilyKind::Gaussian => ExpFamilyModel::gaussian(sigma.unwrap_or(1.0))?,
                ExpFamilyKind::ExponentialRate => ExpFamilyModel::exponential_rate(),
            };
            RegisteredModel::ExpFamily(Arc::new(m))
        }
        ModelSpec::WienerJ { j } => {
            if !(2..=super::wiener::MAX_J).contains(&j) {
                return Err(Error::InvalidInput(format!("wiener_j needs 2 <= j <= {}, got {j}", super::wiener::MAX_J)));
            }
            RegisteredModel::Wiener { j }
        }
    };
    if let Some(m) = model.as_model1d() {
        let p = m.param_space();
        let thetas: Vec<f64> = if p.is_bounded() {
            (1..4).map(|i| p.lo() + p.width() * i as f64 / 4.0).collect()
        } else if p.lo().is_finite() {
            (1..4).map(|i| p.lo() + 0.5 * i as f64).collect()
        } else {
            vec![-2.0, 0.0, 2.0]
        };
        check_normalization(&*m, &thetas)?;
    }
    Ok(model)
}

/// `∫ f(x|θ) dx = 1 ± 1e-6` over the data space for each `θ` in `thetas`.
pub fn check_normalization(model: &dyn Model1D, thetas: &[f64]) -> Result<()> {
    let Some(space) = model.data_support() else {
        return Ok(());
    };
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-10).with_max_subdivisions(500);
    for &theta in thetas {
        let breaks = [theta];
        let total = integrate_split(|x| model.log_likelihood(&[x], theta).exp(), space, &breaks, &spec)?.value;
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "{}: likelihood integrates to {total} at theta = {theta}",
                model.name()
            )));
        }
    }
    Ok(())
}
