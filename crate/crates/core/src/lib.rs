//! Green function, Green-identity boundary term and spontaneous-emission
//! rates for a dissipative slab in one dimension, plus the free-space 3D
//! dyadic Green tensor used as the vacuum baseline.

pub mod cli;
pub mod dielectric;
pub mod emission;
pub mod error;
pub mod identity;
pub mod quadrature;
pub mod slab_green;
pub mod units;
pub mod vacuum3d;

pub use dielectric::{
    refractive_index, DielectricModel, DielectricRegistry, Permittivity, RefractiveIndex,
};
pub use error::{Error, Result};
pub use slab_green::{GreenEval, Region, SlabCoefficients, SlabGeometry, WaveContext};
pub use units::{PhysicalConstants, UnitSystem};
