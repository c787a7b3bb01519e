//! Unit systems.
//!
//! All formulas are written with explicit `c`, `hbar` and `epsilon0` so the
//! same code serves natural units (all three equal to one) and SI.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[default]
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light.
    pub c: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Vacuum permittivity.
    pub epsilon0: f64,
}

impl PhysicalConstants {
    pub const NATURAL: Self = Self {
        c: 1.0,
        hbar: 1.0,
        epsilon0: 1.0,
    };

    /// CODATA 2018.
    pub const SI: Self = Self {
        c: 299_792_458.0,
        hbar: 1.054_571_817e-34,
        epsilon0: 8.854_187_812_8e-12,
    };
}

impl UnitSystem {
    pub fn constants(self) -> PhysicalConstants {
        match self {
            UnitSystem::Natural => PhysicalConstants::NATURAL,
            UnitSystem::Si => PhysicalConstants::SI,
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitSystem::Natural => "natural",
            UnitSystem::Si => "si",
        })
    }
}

impl FromStr for UnitSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "natural" => Ok(UnitSystem::Natural),
            "si" => Ok(UnitSystem::Si),
            other => Err(format!(
                "unknown unit system '{other}' (expected natural|si)"
            )),
        }
    }
}
