//! Spontaneous-emission rates of a dipole emitter right of the slab.
//!
//! Three rate routes are available, each behind [`DecayRate`] and registered
//! by name in a [`RateRegistry`]:
//!
//! * `corrected`: `Γ = (Γ₁ᴅ/2)·(1 − |A|² − |D|²)`, the rate with the boundary
//!   term included. It does not depend on the emitter position.
//! * `uncorrected`: `Γ_G = Γ₁ᴅ·[1 + Re{D e^{−2ik(ℓ−x_S)}}]`, the rate from
//!   `Im G` alone, which oscillates with `x_S`.
//! * `quadrature`: the corrected rate recomputed from a quadrature of the
//!   volume integral, used as an oracle for `corrected`.
//!
//! `Γ₁ᴅ = ω₀|d|²/(ħε₀cS)` is the rate an emitter would have in the empty 1D
//! line; it is the normalisation for every reported rate.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{positive, Error, Result};
use crate::identity::{boundary_term_f, lhs_quadrature};
use crate::slab_green::{SlabGeometry, WaveContext};
use crate::units::PhysicalConstants;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Emitter and normalisation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionParams {
    transition_frequency: f64,
    dipole_moment: f64,
    constants: PhysicalConstants,
    surface_unit: f64,
}

impl EmissionParams {
    pub fn new(
        transition_frequency: f64,
        dipole_moment: f64,
        constants: PhysicalConstants,
        surface_unit: f64,
    ) -> Result<Self> {
        positive("transition_frequency", transition_frequency)?;
        positive("dipole_moment", dipole_moment)?;
        positive("c", constants.c)?;
        positive("hbar", constants.hbar)?;
        positive("epsilon0", constants.epsilon0)?;
        positive("surface_unit", surface_unit)?;
        Ok(Self {
            transition_frequency,
            dipole_moment,
            constants,
            surface_unit,
        })
    }

    /// `ħ = ε₀ = c = |d| = S = 1`.
    pub fn natural(transition_frequency: f64) -> Result<Self> {
        Self::new(transition_frequency, 1.0, PhysicalConstants::NATURAL, 1.0)
    }

    pub fn transition_frequency(&self) -> f64 {
        self.transition_frequency
    }

    pub fn dipole_moment(&self) -> f64 {
        self.dipole_moment
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn surface_unit(&self) -> f64 {
        self.surface_unit
    }

    /// Same emitter at another transition frequency.
    pub fn with_frequency(&self, transition_frequency: f64) -> Result<Self> {
        Self::new(
            transition_frequency,
            self.dipole_moment,
            self.constants,
            self.surface_unit,
        )
    }

    pub fn wavenumber(&self) -> f64 {
        self.transition_frequency / self.constants.c
    }

    /// `ω₀|d|² / (ħ ε₀ c S)`.
    pub fn gamma_vac_1d(&self) -> f64 {
        let PhysicalConstants { c, hbar, epsilon0 } = self.constants;
        self.transition_frequency * self.dipole_moment.powi(2)
            / (hbar * epsilon0 * c * self.surface_unit)
    }

    /// `2ω₀²|d|² / (ħ ε₀ c² S)`, the factor multiplying `Im G + F`.
    pub fn rate_prefactor(&self) -> f64 {
        2.0 * self.gamma_vac_1d() * self.wavenumber()
    }

    pub fn context(&self, geometry: SlabGeometry, epsilon: Complex64) -> Result<WaveContext> {
        WaveContext::from_epsilon(
            geometry,
            epsilon,
            self.transition_frequency,
            self.constants.c,
        )
    }

    fn check(&self, ctx: &WaveContext) -> Result<()> {
        let k = self.wavenumber();
        if (ctx.k() - k).abs() <= 1e-12 * k {
            Ok(())
        } else {
            Err(Error::FrequencyMismatch {
                context: ctx.k() * self.constants.c,
                emitter: self.transition_frequency,
            })
        }
    }
}

/// Rate with the boundary term: `(ω₀|d|²/2ħε₀cS)(1 − |A|² − |D|²)`.
pub fn decay_rate_corrected(params: &EmissionParams, ctx: &WaveContext) -> Result<f64> {
    params.check(ctx)?;
    Ok(0.5 * params.gamma_vac_1d() * ctx.coefficients().absorbed())
}

/// Rate from `Im G` alone.
pub fn decay_rate_uncorrected(params: &EmissionParams, ctx: &WaveContext, x_s: f64) -> Result<f64> {
    params.check(ctx)?;
    ctx.require_right(x_s)?;
    let d = ctx.coefficients().d;
    let k = ctx.k();
    let modulation = (d * (-2.0 * I * k * (ctx.half_length() - x_s)).exp()).re;
    Ok(params.gamma_vac_1d() * (1.0 + modulation))
}

/// Corrected rate from the quadrature of `k² ∫ ε_i |G(x, x_S)|² dx`.
pub fn decay_from_quadrature(
    params: &EmissionParams,
    ctx: &WaveContext,
    x_s: f64,
    tol: f64,
) -> Result<f64> {
    params.check(ctx)?;
    let lhs = lhs_quadrature(x_s, x_s, ctx, tol)?;
    Ok(params.rate_prefactor() * lhs.value.re)
}

/// One way of computing a decay rate.
pub trait DecayRate: Send + Sync {
    fn name(&self) -> &'static str;

    /// Rate in 1/s (or natural units) for an emitter at `x_s`.
    fn rate(&self, params: &EmissionParams, ctx: &WaveContext, x_s: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Corrected;

impl DecayRate for Corrected {
    fn name(&self) -> &'static str {
        "corrected"
    }

    fn rate(&self, params: &EmissionParams, ctx: &WaveContext, x_s: f64) -> Result<f64> {
        ctx.require_right(x_s)?;
        decay_rate_corrected(params, ctx)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Uncorrected;

impl DecayRate for Uncorrected {
    fn name(&self) -> &'static str {
        "uncorrected"
    }

    fn rate(&self, params: &EmissionParams, ctx: &WaveContext, x_s: f64) -> Result<f64> {
        decay_rate_uncorrected(params, ctx, x_s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub tol: f64,
}

impl DecayRate for Quadrature {
    fn name(&self) -> &'static str {
        "quadrature"
    }

    fn rate(&self, params: &EmissionParams, ctx: &WaveContext, x_s: f64) -> Result<f64> {
        decay_from_quadrature(params, ctx, x_s, self.tol)
    }
}

/// Settings shared by rate constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOptions {
    pub tol: f64,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self {
            tol: crate::identity::DEFAULT_TOL,
        }
    }
}

type RateBuilder = fn(&RateOptions) -> Box<dyn DecayRate>;

/// Name → constructor table for decay-rate routes.
#[derive(Clone)]
pub struct RateRegistry {
    builders: BTreeMap<&'static str, RateBuilder>,
}

impl fmt::Debug for RateRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.builders.keys()).finish()
    }
}

impl RateRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("corrected", |_| Box::new(Corrected));
        r.register("uncorrected", |_| Box::new(Uncorrected));
        r.register("quadrature", |o| Box::new(Quadrature { tol: o.tol }));
        r
    }

    pub fn register(&mut self, name: &'static str, builder: RateBuilder) {
        self.builders.insert(name, builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.keys().copied()
    }

    pub fn create(&self, name: &str, opts: &RateOptions) -> Result<Box<dyn DecayRate>> {
        self.builders
            .get(name)
            .map(|b| b(opts))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "decay-rate method",
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })
    }
}

impl Default for RateRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRateReport {
    pub gamma_corrected: f64,
    pub gamma_uncorrected: f64,
    pub gamma_quadrature: f64,
    pub gamma_vac_1d: f64,
    pub normalized_corrected: f64,
    pub normalized_uncorrected: f64,
}

pub fn decay_rate_report(
    params: &EmissionParams,
    ctx: &WaveContext,
    x_s: f64,
    tol: f64,
) -> Result<DecayRateReport> {
    let gamma_corrected = decay_rate_corrected(params, ctx)?;
    let gamma_uncorrected = decay_rate_uncorrected(params, ctx, x_s)?;
    let gamma_quadrature = decay_from_quadrature(params, ctx, x_s, tol)?;
    let gamma_vac_1d = params.gamma_vac_1d();
    Ok(DecayRateReport {
        gamma_corrected,
        gamma_uncorrected,
        gamma_quadrature,
        gamma_vac_1d,
        normalized_corrected: gamma_corrected / gamma_vac_1d,
        normalized_uncorrected: gamma_uncorrected / gamma_vac_1d,
    })
}

/// Diagnostics for one permittivity on a path towards `ε = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitValues {
    pub gamma: f64,
    pub gamma_uncorrected: f64,
    /// `F(x_S, x_S) + Im G₀(x_S, x_S)`; tends to zero as `ε → 1`.
    pub f_plus_im_g0: f64,
    /// `|A|²`.
    pub transmitted: f64,
    /// `|D|²`.
    pub reflected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub epsilon: Complex64,
    pub outcome: Result<LimitValues>,
}

/// `ε = 1 + i·10⁻ᵐ` for `m = 1..=8`, followed by `ε = 1`.
pub fn default_limit_path() -> Vec<Complex64> {
    (1..=8)
        .map(|m| Complex64::new(1.0, 10f64.powi(-m)))
        .chain(std::iter::once(Complex64::new(1.0, 0.0)))
        .collect()
}

fn limit_row(
    params: &EmissionParams,
    geometry: SlabGeometry,
    epsilon: Complex64,
    x_s: f64,
) -> Result<LimitValues> {
    if epsilon.im < 0.0 {
        return Err(Error::InvalidModel(format!(
            "path entry {epsilon} has Im epsilon < 0"
        )));
    }
    let ctx = params.context(geometry, epsilon)?;
    let co = ctx.coefficients();
    let f = boundary_term_f(x_s, x_s, &ctx)?;
    Ok(LimitValues {
        gamma: decay_rate_corrected(params, &ctx)?,
        gamma_uncorrected: decay_rate_uncorrected(params, &ctx, x_s)?,
        f_plus_im_g0: f.re + 1.0 / (2.0 * ctx.k()),
        transmitted: co.a.norm_sqr(),
        reflected: co.d.norm_sqr(),
    })
}

/// Evaluates each permittivity on `path`; a failing row does not stop the table.
pub fn limit_study(
    params: &EmissionParams,
    geometry: SlabGeometry,
    path: &[Complex64],
    x_s: f64,
) -> Vec<LimitRow> {
    path.par_iter()
        .map(|&epsilon| LimitRow {
            epsilon,
            outcome: limit_row(params, geometry, epsilon, x_s),
        })
        .collect()
}

fn sinusoid_residual(xs: &[f64], ys: &[f64], omega: f64) -> f64 {
    // least squares on [1, cos ωx, sin ωx] via the 3x3 normal equations
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let basis = [1.0, (omega * x).cos(), (omega * x).sin()];
        for i in 0..3 {
            r[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(&m);
    if d.abs() < 1e-300 {
        return f64::INFINITY;
    }
    let mut coef = [0.0; 3];
    for (col, c) in coef.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = r[row];
        }
        *c = det(&mc) / d;
    }
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let fit = coef[0] + coef[1] * (omega * x).cos() + coef[2] * (omega * x).sin();
            (y - fit).powi(2)
        })
        .sum()
}

/// Period of a sampled sinusoid.
///
/// Crossings of the sample mean give a first estimate; the angular frequency
/// is then refined by minimising the least-squares residual of a
/// `a + b cos ωx + c sin ωx` fit. Needs at least three mean crossings.
pub fn oscillation_period(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 4 {
        return None;
    }
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let crossings: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .filter_map(|(x, y)| {
            let (a, b) = (y[0] - mean, y[1] - mean);
            (a * b < 0.0 || (a == 0.0 && b != 0.0)).then(|| x[0] + (x[1] - x[0]) * a / (a - b))
        })
        .collect();
    if crossings.len() < 3 {
        return None;
    }
    let first_guess =
        2.0 * (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    let omega0 = 2.0 * std::f64::consts::PI / first_guess;

    // golden-section search on [0.8 ω0, 1.2 ω0]
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.8 * omega0, 1.2 * omega0);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (sinusoid_residual(xs, ys, c), sinusoid_residual(xs, ys, d));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * omega0 {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = sinusoid_residual(xs, ys, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = sinusoid_residual(xs, ys, d);
        }
    }
    Some(2.0 * std::f64::consts::PI / (0.5 * (lo + hi)))
}
