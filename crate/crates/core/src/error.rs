use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{quantity} = {value} is outside its domain: {reason}")]
    Domain {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("frequency {omega} is outside the tabulated range [{min}, {max}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    #[error("invalid dielectric model: {0}")]
    InvalidModel(String),

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("permittivity {0} is zero: the refractive index is undefined")]
    DegenerateMedium(Complex64),

    #[error("slab resonance denominator |Y| = {magnitude:e} is numerically zero")]
    NearResonance { magnitude: f64 },

    #[error("source at x = {x_s} lies inside the slab |x| <= {half_length}")]
    SourceInsideSlab { x_s: f64, half_length: f64 },

    #[error("point x = {x} must lie right of the slab (x > {half_length})")]
    NotRightRegion { x: f64, half_length: f64 },

    #[error("finite-difference stencil at x = {x} with step {h} crosses a discontinuity at {at}")]
    StencilCrossesDiscontinuity { x: f64, h: f64, at: f64 },

    #[error("coincident points: the vacuum Green tensor is singular at r_A = r_B")]
    Singular,

    #[error(
        "quadrature did not reach tolerance {tol:e} within {panels} panels \
         (estimate {best}, error {error_estimate:e})"
    )]
    QuadratureFailure {
        best: Complex64,
        error_estimate: f64,
        tol: f64,
        panels: usize,
    },

    #[error(
        "wave context built at omega = {context} but emitter transition frequency is {emitter}"
    )]
    FrequencyMismatch { context: f64, emitter: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn positive(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            quantity,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}
