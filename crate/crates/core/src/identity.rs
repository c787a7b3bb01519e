//! The one-dimensional Green identity with its boundary term.
//!
//! For two exterior points `x_A, x_B` right of the slab,
//!
//! ```text
//! k² ∫ ε_i(x) G(x, x_A) G*(x, x_B) dx = Im G(x_A, x_B) + F(x_A, x_B)
//! ```
//!
//! where `F = (1/2i)[b(x_B, x_A) − b*(x_A, x_B)]` collects the surface
//! contributions at `±L`. Dropping `F` gives the identity commonly used to
//! simplify emission rates; [`IdentityReport`] quantifies by how much it
//! misses.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Integral, QuadratureOptions};
use crate::slab_green::{Region, WaveContext};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default absolute tolerance of the left-hand-side quadrature.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Upper bound on quadrature panels.
pub const MAX_PANELS: usize = 50_000;

/// `b(x_B, x_A) = −[G*(x, x_B) ∂ₓG(x, x_A)]` between `x = −L` and `x = L`,
/// from the analytic derivatives of the exterior branches.
pub fn boundary_term_b(x_b: f64, x_a: f64, ctx: &WaveContext, big_l: f64) -> Result<Complex64> {
    ctx.require_right(x_a)?;
    ctx.require_right(x_b)?;
    let bound = ctx.half_length().max(x_a).max(x_b);
    if !(big_l.is_finite() && big_l > bound) {
        return Err(Error::Domain {
            quantity: "L",
            value: big_l,
            reason: "the virtual box must enclose the slab and both points",
        });
    }
    let (g_left_b, _) = ctx.branch(Region::Left, -big_l, x_b)?;
    let (_, dg_left_a) = ctx.branch(Region::Left, -big_l, x_a)?;
    let (g_right_b, _) = ctx.branch(Region::Right, big_l, x_b)?;
    let (_, dg_right_a) = ctx.branch(Region::Right, big_l, x_a)?;
    Ok(g_left_b.conj() * dg_left_a - g_right_b.conj() * dg_right_a)
}

/// `F(x_A, x_B)` assembled from two evaluations of [`boundary_term_b`].
pub fn boundary_term_f_from_b(
    x_a: f64,
    x_b: f64,
    ctx: &WaveContext,
    big_l: f64,
) -> Result<Complex64> {
    let b_ba = boundary_term_b(x_b, x_a, ctx, big_l)?;
    let b_ab = boundary_term_b(x_a, x_b, ctx, big_l)?;
    Ok((b_ba - b_ab.conj()) / (2.0 * I))
}

/// Closed form of `F(x_A, x_B)`:
///
/// ```text
/// F = −(1/4k) [ (|A|²+|D|²) e^{ik(x_A−x_B)} + e^{−ik(x_A−x_B)} + 2 Re{D e^{−ik(2ℓ−x_A−x_B)}} ]
/// ```
pub fn boundary_term_f(x_a: f64, x_b: f64, ctx: &WaveContext) -> Result<Complex64> {
    ctx.require_right(x_a)?;
    ctx.require_right(x_b)?;
    let k = ctx.k();
    let l = ctx.half_length();
    let co = ctx.coefficients();
    let delta = x_a - x_b;
    let bracket = co.transmitted_plus_reflected() * (I * k * delta).exp()
        + (-I * k * delta).exp()
        + 2.0 * (co.d * (-I * k * (2.0 * l - x_a - x_b)).exp()).re;
    Ok(-bracket / (4.0 * k))
}

/// Equal panels of at most a tenth of the in-medium wavelength.
fn initial_panels(ctx: &WaveContext) -> usize {
    let re_n = ctx.index().value().re;
    if re_n <= 0.0 {
        return 1;
    }
    let wavelength = 2.0 * PI / (ctx.k() * re_n);
    let panels = (2.0 * ctx.half_length() / (wavelength / 10.0)).ceil();
    (panels as usize).clamp(1, MAX_PANELS / 2)
}

/// Adaptive quadrature of `k² ε_i ∫_{−ℓ}^{ℓ} G(x, x_A) G*(x, x_B) dx`.
pub fn lhs_quadrature(x_a: f64, x_b: f64, ctx: &WaveContext, tol: f64) -> Result<Integral> {
    ctx.require_right(x_a)?;
    ctx.require_right(x_b)?;
    let scale = ctx.k() * ctx.k() * ctx.epsilon().im;
    let l = ctx.half_length();
    let integrand = |x: f64| {
        let (ga, _) = ctx
            .branch(Region::Inside, x, x_a)
            .expect("source checked to be right of the slab");
        let (gb, _) = ctx
            .branch(Region::Inside, x, x_b)
            .expect("source checked to be right of the slab");
        scale * ga * gb.conj()
    };
    let opts = QuadratureOptions {
        tol,
        initial_panels: initial_panels(ctx),
        max_panels: MAX_PANELS,
    };
    integrate(integrand, -l, l, &opts)
}

/// Both sides of the Green identity at one `(x_A, x_B)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub x_a: f64,
    pub x_b: f64,
    /// Quadrature of the left-hand side.
    pub lhs: Complex64,
    /// `Im G(x_A, x_B)`.
    pub im_g: f64,
    /// Boundary term `F(x_A, x_B)`.
    pub f: Complex64,
    /// `lhs − Im G − F`.
    pub residual_corrected: Complex64,
    /// `lhs − Im G`.
    pub residual_uncorrected: Complex64,
    pub quadrature_estimate_error: f64,
}

impl IdentityReport {
    /// Acceptance bound on `|residual_corrected|` for quadrature tolerance `tol`.
    pub fn bound(&self, tol: f64) -> f64 {
        tol.max(1e-10 * self.lhs.norm())
    }

    pub fn corrected_holds(&self, tol: f64) -> bool {
        self.residual_corrected.norm() <= self.bound(tol)
    }
}

pub fn identity_report(x_a: f64, x_b: f64, ctx: &WaveContext, tol: f64) -> Result<IdentityReport> {
    let integral = lhs_quadrature(x_a, x_b, ctx, tol)?;
    let im_g = ctx.green(x_a, x_b)?.value.im;
    let f = boundary_term_f(x_a, x_b, ctx)?;
    let lhs = integral.value;
    Ok(IdentityReport {
        x_a,
        x_b,
        lhs,
        im_g,
        f,
        residual_corrected: lhs - im_g - f,
        residual_uncorrected: lhs - im_g,
        quadrature_estimate_error: integral.error_estimate,
    })
}
