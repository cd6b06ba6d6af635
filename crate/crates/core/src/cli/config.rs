use serde::{Deserialize, Serialize};

use crate::bounds::{SignMode, TimeGrid, DEFAULT_POINTS};
use crate::error::{invalid, QslError, Result};
use crate::models::{
    HomogeneousEntangledModel, HomogeneousProductModel, Model, QubitGhzModel, QubitProductModel,
    SpinChainModel,
};
use crate::optimizer::{GridSpec, ObjectiveSpec, DEFAULT_PANELS, DEFAULT_SAMPLES};
use crate::ortho::OrthoChoice;
use crate::quantum::{HermitianOperator, PauliString, PauliSum, PhysicalConstants, C64};

/// One run: a model, its orthogonal-state choices, a time grid and outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub sign_mode: SignMode,
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ortho: Vec<OrthoSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    HomogeneousProduct,
    QubitProduct,
    HomogeneousEntangled,
    QubitGhz,
    SpinChain,
}

impl std::str::FromStr for ModelKind {
    type Err = QslError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "homogeneous-product" => ModelKind::HomogeneousProduct,
            "qubit-product" => ModelKind::QubitProduct,
            "homogeneous-entangled" => ModelKind::HomogeneousEntangled,
            "qubit-ghz" => ModelKind::QubitGhz,
            "spin-chain" => ModelKind::SpinChain,
            _ => return Err(invalid(format!("unknown model kind {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Real amplitude of |0⟩ for the qubit models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Relative phase of β, in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, m: usize) -> Self {
        Self { kind, m, n: None, k: None, alpha: None, beta_phase: None, omega: None, omega0: None, hbar: None }
    }

    /// Parses `kind:key=value,...`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = Self::new(kind.trim().parse()?, 0);
        let mut have_m = false;
        for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("expected key=value, got {item:?}")))?;
            let int = || val.trim().parse::<usize>().map_err(|e| invalid(format!("{key}: {e}")));
            let real = || val.trim().parse::<f64>().map_err(|e| invalid(format!("{key}: {e}")));
            match key.trim() {
                "m" => {
                    spec.m = int()?;
                    have_m = true;
                }
                "n" => spec.n = Some(int()?),
                "k" => spec.k = Some(int()?),
                "alpha" => spec.alpha = Some(real()?),
                "beta_phase" => spec.beta_phase = Some(real()?),
                "omega" => spec.omega = Some(real()?),
                "omega0" => spec.omega0 = Some(real()?),
                "hbar" => spec.hbar = Some(real()?),
                other => return Err(invalid(format!("unknown model key {other:?}"))),
            }
        }
        if !have_m {
            return Err(invalid("model flag needs m=..."));
        }
        Ok(spec)
    }

    pub fn consts(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.hbar.unwrap_or(1.0), self.omega.unwrap_or(1.0), self.omega0.unwrap_or(0.0))
    }

    pub fn build(&self) -> Result<Model> {
        let c = self.consts()?;
        let need_n = || self.n.ok_or_else(|| invalid(format!("{:?} needs n", self.kind)));
        let amplitudes = || -> Result<(C64, C64)> {
            let a = self.alpha.ok_or_else(|| invalid(format!("{:?} needs alpha", self.kind)))?;
            if !(0.0..=1.0).contains(&a) {
                return Err(invalid(format!("alpha must lie in [0, 1] (got {a})")));
            }
            let b = (1.0 - a * a).max(0.0).sqrt();
            Ok((C64::new(a, 0.0), C64::from_polar(b, self.beta_phase.unwrap_or(0.0))))
        };
        let unexpected = |what: &str, set: bool| {
            if set {
                Err(invalid(format!("{:?} does not take {what}", self.kind)))
            } else {
                Ok(())
            }
        };
        match self.kind {
            ModelKind::HomogeneousProduct | ModelKind::HomogeneousEntangled => {
                unexpected("alpha", self.alpha.is_some() || self.beta_phase.is_some())?;
                unexpected("k", self.k.is_some())?;
            }
            ModelKind::QubitProduct | ModelKind::QubitGhz => {
                unexpected("n", self.n.is_some())?;
                unexpected("k", self.k.is_some())?;
            }
            ModelKind::SpinChain => {
                unexpected("n or alpha", self.n.is_some() || self.alpha.is_some() || self.beta_phase.is_some())?;
            }
        }
        if self.kind != ModelKind::SpinChain && self.omega0.is_some() {
            unexpected("omega0", true)?;
        }
        Ok(match self.kind {
            ModelKind::HomogeneousProduct => HomogeneousProductModel::new(self.m, need_n()?, c)?.into(),
            ModelKind::HomogeneousEntangled => HomogeneousEntangledModel::new(self.m, need_n()?, c)?.into(),
            ModelKind::QubitProduct => {
                let (a, b) = amplitudes()?;
                QubitProductModel::new(a, b, self.m, c)?.into()
            }
            ModelKind::QubitGhz => {
                let (a, b) = amplitudes()?;
                QubitGhzModel::new(a, b, self.m, c)?.into()
            }
            ModelKind::SpinChain => {
                let k = self.k.ok_or_else(|| invalid("spin-chain needs k"))?;
                SpinChainModel::new(self.m, k, c)?.into()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OrthoSpec {
    ProjectorDeviation,
    Bloch { theta: f64, phi: f64 },
    /// Σ coefficients[i]·strings[i] over the model's qubits.
    Custom { strings: Vec<String>, coefficients: Vec<f64> },
}

impl OrthoSpec {
    /// `projector`, `bloch:theta=..,phi=..` or `custom:XZ=0.5,ZZ=1`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let pairs = || -> Result<Vec<(&str, f64)>> {
            rest.split(',')
                .map(str::trim)
                .filter(|i| !i.is_empty())
                .map(|item| {
                    let (k, v) = item
                        .split_once('=')
                        .ok_or_else(|| invalid(format!("expected key=value, got {item:?}")))?;
                    let v = v.trim().parse::<f64>().map_err(|e| invalid(format!("{k}: {e}")))?;
                    Ok((k.trim(), v))
                })
                .collect()
        };
        match kind.trim() {
            "projector" | "projector-deviation" => Ok(OrthoSpec::ProjectorDeviation),
            "bloch" => {
                let (mut theta, mut phi) = (None, None);
                for (k, v) in pairs()? {
                    match k {
                        "theta" => theta = Some(v),
                        "phi" => phi = Some(v),
                        other => return Err(invalid(format!("unknown bloch key {other:?}"))),
                    }
                }
                Ok(OrthoSpec::Bloch {
                    theta: theta.ok_or_else(|| invalid("bloch needs theta"))?,
                    phi: phi.ok_or_else(|| invalid("bloch needs phi"))?,
                })
            }
            "custom" => {
                let (strings, coefficients) = pairs()?.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
                Ok(OrthoSpec::Custom { strings, coefficients })
            }
            other => Err(invalid(format!("unknown ortho kind {other:?}"))),
        }
    }

    pub fn build(&self, model: &Model) -> Result<OrthoChoice> {
        match self {
            OrthoSpec::ProjectorDeviation => Ok(OrthoChoice::ProjectorDeviation),
            OrthoSpec::Bloch { theta, phi } => {
                if !model.is_qubit_model() {
                    return Err(QslError::Unsupported(format!("{} has no qubit sites", model.name())));
                }
                OrthoChoice::bloch(*theta, *phi)
            }
            OrthoSpec::Custom { strings, coefficients } => {
                if !model.is_qubit_model() {
                    return Err(QslError::Unsupported(format!("{} has no qubit sites", model.name())));
                }
                if strings.len() != coefficients.len() || strings.is_empty() {
                    return Err(invalid("custom observable needs matching, non-empty strings and coefficients"));
                }
                let terms = strings
                    .iter()
                    .zip(coefficients)
                    .map(|(s, c)| Ok((*c, s.parse::<PauliString>()?)))
                    .collect::<Result<Vec<_>>>()?;
                let op = HermitianOperator::pauli_sum(PauliSum::new(model.sites(), terms)?)?;
                Ok(OrthoChoice::CustomObservable(op))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub t_min: f64,
    pub t_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = QslError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(invalid(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Optima JSON of the optimize command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optima_path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    #[serde(default = "default_step")]
    pub theta_step: f64,
    #[serde(default = "default_step")]
    pub phi_step: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_panels")]
    pub panels_per_step: usize,
    #[serde(default)]
    pub refine: bool,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        Self {
            theta_step: default_step(),
            phi_step: default_step(),
            samples: DEFAULT_SAMPLES,
            panels_per_step: DEFAULT_PANELS,
            refine: false,
        }
    }
}

fn default_step() -> f64 {
    0.1
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_panels() -> usize {
    DEFAULT_PANELS
}

/// Everything a command needs, checked before any computation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: Model,
    pub orthos: Vec<OrthoChoice>,
    pub labels: Vec<String>,
    pub grid: TimeGrid,
    pub sign: SignMode,
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| invalid(format!("config: {e}")))
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let model = self.model.build()?;
        let specs = if self.ortho.is_empty() { vec![OrthoSpec::ProjectorDeviation] } else { self.ortho.clone() };
        let orthos = specs.iter().map(|o| o.build(&model)).collect::<Result<Vec<_>>>()?;
        let labels = specs
            .iter()
            .zip(&orthos)
            .map(|(s, o)| match s {
                OrthoSpec::Custom { strings, coefficients } => {
                    let terms: Vec<String> =
                        strings.iter().zip(coefficients).map(|(s, c)| format!("{c}*{s}")).collect();
                    format!("custom({})", terms.join("+"))
                }
                _ => o.label(),
            })
            .collect();
        let grid = match self.grid {
            Some(g) => TimeGrid::new(g.t_min, g.t_max, g.points)?,
            None => TimeGrid::one_period(model.consts().period())?,
        };
        Ok(Resolved {
            model,
            orthos,
            labels,
            grid,
            sign: self.sign_mode,
            output: self.output.clone().unwrap_or_default(),
        })
    }

    /// Lattice and objective settings of the optimize command.
    pub fn objective(&self, model: &Model) -> Result<(GridSpec, ObjectiveSpec, bool)> {
        if !model.is_qubit_model() {
            return Err(QslError::Unsupported(format!(
                "optimize needs a qubit model; {} has local dimension {}",
                model.name(),
                model.local_dim()
            )));
        }
        let o = self.optimizer.unwrap_or_default();
        let lattice = GridSpec::new(o.theta_step, o.phi_step)?;
        if o.samples == 0 || o.panels_per_step == 0 {
            return Err(invalid("optimizer samples and panels_per_step must be positive"));
        }
        let end = self.grid.map_or(model.consts().period(), |g| g.t_max);
        if !(end > 0.0 && end.is_finite()) {
            return Err(invalid("objective window must end after T = 0"));
        }
        let mut spec = ObjectiveSpec::one_period(end, o.samples, self.sign_mode)?;
        spec.panels_per_step = o.panels_per_step;
        Ok((lattice, spec, o.refine))
    }
}
