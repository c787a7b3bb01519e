//! JSON run configuration.
//!
//! Every section is optional at parse time; each subcommand checks for the
//! sections it needs. Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::units::UnitSystem;

use super::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: Option<UnitSystem>,
    #[serde(default)]
    pub slab: Option<SlabConfig>,
    /// Dielectric description with a `"type"` discriminator; resolved
    /// through the dielectric registry.
    #[serde(default)]
    pub dielectric: Option<Value>,
    #[serde(default)]
    pub omega: Option<Axis>,
    #[serde(default)]
    pub source: Option<Axis>,
    #[serde(default)]
    pub emission: EmissionConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    #[serde(default)]
    pub limit_study: Option<LimitStudyConfig>,
    #[serde(default)]
    pub tensor3d: Option<Tensor3dConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabConfig {
    pub half_length: Axis,
}

/// A single value or a sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Value(f64),
    Sweep(Sweep),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionConfig {
    #[serde(default = "one")]
    pub dipole_moment: f64,
    #[serde(default = "one")]
    pub surface_unit: f64,
}

impl Default for EmissionConfig {
    fn default() -> Self {
        Self {
            dipole_moment: 1.0,
            surface_unit: 1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default)]
    pub quadrature: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitStudyConfig {
    /// Permittivities as `[re, im]` pairs.
    pub path: Vec<Complex64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tensor3dConfig {
    /// `r_A − r_B` vectors.
    pub separations: Vec<[f64; 3]>,
    #[serde(default = "z_axis")]
    pub dipole_direction: [f64; 3],
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

impl Axis {
    /// Sample points; `field` names the config path for diagnostics.
    pub fn points(&self, field: &str) -> Result<Vec<f64>, CliError> {
        match self {
            Axis::Value(v) => {
                if v.is_finite() {
                    Ok(vec![*v])
                } else {
                    Err(CliError::Validation(format!("{field}: must be finite")))
                }
            }
            Axis::Sweep(s) => s.points(field),
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, Axis::Value(_) | Axis::Sweep(Sweep { count: 1, .. }))
    }
}

impl Sweep {
    pub fn points(&self, field: &str) -> Result<Vec<f64>, CliError> {
        let invalid = |msg: &str| Err(CliError::Validation(format!("{field}.{msg}")));
        if self.count < 1 {
            return invalid("count: must be >= 1");
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return invalid("start: start and stop must be finite");
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if self.start >= self.stop {
            return invalid("stop: must be greater than start");
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return invalid("start: log spacing needs start > 0");
        }
        let last = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|j| {
                let t = j as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp()
                    }
                }
            })
            .collect())
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Validation(format!("config {path}: {}", e.inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
