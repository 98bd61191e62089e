//! JSON run configuration. Every block has a complete set of defaults, so
//! the empty object {} is a valid config and reproduces classical
//! Camassa-Holm: a = 2, b = 1, identity dispersion, u0 = cos x on a 128-node
//! grid of period 2 pi, fixed RK4 with dt = 1e-3 to t = 1. Unknown keys are
//! rejected everywhere, and validation names the offending field before any
//! computation starts.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::operator::OperatorL;
use crate::spectral::{Field, Grid};
use crate::timestep::{MonitorConfig, StepperConfig};
use crate::verify::SampleSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub period: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 128, period: TAU }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.n, self.period)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub a: f64,
    pub b: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig { a: 2.0, b: 1.0 }
    }
}

/// One cosine term of a mode-list initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub mode: usize,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

fn one() -> f64 {
    1.0
}

fn one_mode() -> usize {
    1
}

/// Initial velocity profile, selected by "kind".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCondition {
    /// amplitude * cos(mode * x_scaled + phase), mode counted in whole
    /// oscillations per period.
    Cosine {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one_mode")]
        mode: usize,
        #[serde(default)]
        phase: f64,
    },
    /// A finite cosine series.
    FourierModes { modes: Vec<ModeSpec> },
    /// A periodized Gaussian amplitude * exp(-(x - center)^2 / (2 width^2)),
    /// summed over periodic images.
    GaussianBump {
        #[serde(default = "one")]
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
    },
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::Cosine {
            amplitude: 1.0,
            mode: 1,
            phase: 0.0,
        }
    }
}

impl InitialCondition {
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let check_mode = |mode: usize, field: &str| -> Result<()> {
            if mode == 0 {
                return Err(Error::config(format!("{field}: must be at least 1")));
            }
            if mode > grid.dealias_band() {
                return Err(Error::config(format!(
                    "{field}: mode {} is outside the alias-safe band {} of an n = {} grid",
                    mode,
                    grid.dealias_band(),
                    grid.len()
                )));
            }
            Ok(())
        };
        match self {
            InitialCondition::Cosine {
                amplitude, mode, phase,
            } => {
                if !amplitude.is_finite() {
                    return Err(Error::config("initial.amplitude: must be finite"));
                }
                if !phase.is_finite() {
                    return Err(Error::config("initial.phase: must be finite"));
                }
                check_mode(*mode, "initial.mode")
            }
            InitialCondition::FourierModes { modes } => {
                if modes.is_empty() {
                    return Err(Error::config(
                        "initial.modes: need at least one cosine term",
                    ));
                }
                for (i, m) in modes.iter().enumerate() {
                    if !(m.amplitude.is_finite() && m.phase.is_finite()) {
                        return Err(Error::config(format!(
                            "initial.modes[{i}]: amplitude and phase must be finite"
                        )));
                    }
                    check_mode(m.mode, &format!("initial.modes[{i}].mode"))?;
                }
                Ok(())
            }
            InitialCondition::GaussianBump {
                amplitude, width, center,
            } => {
                if !amplitude.is_finite() {
                    return Err(Error::config("initial.amplitude: must be finite"));
                }
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::config(format!(
                        "initial.width: must be positive and finite (got {width})"
                    )));
                }
                if !center.is_finite() {
                    return Err(Error::config("initial.center: must be finite"));
                }
                Ok(())
            }
        }
    }

    pub fn realize(&self, grid: &Grid) -> Result<Field> {
        self.validate(grid)?;
        let fundamental = grid.fundamental();
        Ok(match self {
            InitialCondition::Cosine {
                amplitude, mode, phase,
            } => {
                let k = fundamental * *mode as f64;
                Field::from_fn(grid, 0.0, |x| amplitude * (k * x + phase).cos())
            }
            InitialCondition::FourierModes { modes } => Field::from_fn(grid, 0.0, |x| {
                modes
                    .iter()
                    .map(|m| m.amplitude * (fundamental * m.mode as f64 * x + m.phase).cos())
                    .sum()
            }),
            InitialCondition::GaussianBump {
                amplitude, width, center,
            } => {
                let period = grid.period();
                Field::from_fn(grid, 0.0, |x| {
                    (-8..=8i32)
                        .map(|image| {
                            let d = x - center + f64::from(image) * period;
                            amplitude * (-d * d / (2.0 * width * width)).exp()
                        })
                        .sum()
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Directory artifacts are written into; created if missing.
    pub directory: String,
    /// Diagnostic records between snapshot files; 0 keeps only the initial
    /// and final snapshots.
    pub stride: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: "out".into(),
            stride: 0,
        }
    }
}

/// Manufactured-solution sweep for the temporal-order study: the exact
/// solution is amplitude * cos(x - speed * t) and the sweep integrates the
/// forced system once per step size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    pub amplitude: f64,
    pub speed: f64,
    pub dts: Vec<f64>,
    pub t_end: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig {
            amplitude: 0.5,
            speed: 1.0,
            dts: vec![4e-3, 2e-3, 1e-3],
            t_end: 0.5,
        }
    }
}

impl ConvergeConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() {
            return Err(Error::config("converge.amplitude: must be finite"));
        }
        if !self.speed.is_finite() {
            return Err(Error::config("converge.speed: must be finite"));
        }
        if self.dts.len() < 3 {
            return Err(Error::config(format!(
                "converge.dts: an observed order needs at least 3 step sizes (got {})",
                self.dts.len()
            )));
        }
        for dt in &self.dts {
            if !(dt.is_finite() && *dt > 0.0) {
                return Err(Error::config(format!(
                    "converge.dts: every step must be positive and finite (got {dt})"
                )));
            }
        }
        let mut sorted = self.dts.clone();
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        sorted.dedup();
        if sorted.len() != self.dts.len() {
            return Err(Error::config("converge.dts: step sizes must be distinct"));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config(format!(
                "converge.t_end: must be positive and finite (got {})",
                self.t_end
            )));
        }
        Ok(())
    }
}

/// Knobs for the verification suites. The norm index defaults to 4 + p when
/// unset, with p the dispersion order of the configured operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub s: Option<f64>,
    pub commutator_order: f64,
    pub commutator_s: f64,
    pub commutator_sigma: f64,
    pub growth_t: f64,
    pub growth_dt: f64,
    pub dependence_t: f64,
    pub dependence_dt: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            s: None,
            commutator_order: 1.0,
            commutator_s: 1.0,
            commutator_sigma: 2.0,
            growth_t: 0.1,
            growth_dt: 1e-3,
            dependence_t: 0.25,
            dependence_dt: 1e-3,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.s {
            if !s.is_finite() {
                return Err(Error::config("verify.s: must be finite"));
            }
        }
        for (value, field) in [
            (self.growth_t, "verify.growth_t"),
            (self.growth_dt, "verify.growth_dt"),
            (self.dependence_t, "verify.dependence_t"),
            (self.dependence_dt, "verify.dependence_dt"),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!(
                    "{field}: must be positive and finite (got {value})"
                )));
            }
        }
        Ok(())
    }

    /// The suite norm index: explicit, else 4 + p.
    pub fn norm_index(&self, op: &OperatorL) -> f64 {
        self.s.unwrap_or(4.0 + op.order())
    }
}

/// Full run configuration; see the module docs for the zero-config meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub operator: Option<String>,
    pub params: ParamsConfig,
    pub initial: InitialCondition,
    pub time: StepperConfig,
    pub monitor: MonitorConfig,
    pub output: OutputConfig,
    pub converge: ConvergeConfig,
    pub samples: SampleSpec,
    pub verify: VerifyConfig,
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.into(),
            line: e.line(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Check every block without building anything heavyweight.
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid.build()?;
        let params = self.build_params()?;
        params.validate_on(&grid)?;
        self.initial.validate(&grid)?;
        self.time.validate()?;
        self.monitor.validate()?;
        self.converge.validate()?;
        self.samples.validate(&grid)?;
        self.verify.validate()?;
        if self.output.directory.is_empty() {
            return Err(Error::config("output.directory: must not be empty"));
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Grid> {
        self.grid.build()
    }

    pub fn build_operator(&self) -> Result<OperatorL> {
        match &self.operator {
            Some(text) => OperatorL::parse(text),
            None => Ok(OperatorL::identity()),
        }
    }

    pub fn build_params(&self) -> Result<ModelParams> {
        ModelParams::new(self.params.a, self.params.b, self.build_operator()?)
    }

    pub fn build_initial(&self, grid: &Grid) -> Result<Field> {
        self.initial.realize(grid)
    }
}
