//! Green function of a homogeneous lossy slab `[-ℓ, ℓ]` in one dimension.
//!
//! `G` solves `[-∂²ₓ - k² ε(x)] G(x, x_S) = δ(x - x_S)` with outgoing waves on
//! both sides. For a source right of the slab (`x_S > ℓ`) the solution is
//!
//! ```text
//! G_left (x) = (i/2k) A e^{-ik(2ℓ + x - x_S)}
//! G_in   (x) = (i/2k) [B e^{-ik(nx - x_S)} + C e^{ik(nx + x_S)}]
//! G_right(x) = (i/2k) [D e^{-ik(2ℓ - x - x_S)} + e^{ik|x - x_S|}]
//! ```
//!
//! where `A` and `D` are the transmission and reflection amplitudes of the
//! slab referenced to its faces. Sources left of the slab are handled by the
//! mirror symmetry `G(x, x_S) = G(-x, -x_S)`.

use std::fmt;

use num_complex::Complex64;

use crate::dielectric::{refractive_index, DielectricModel, RefractiveIndex};
use crate::error::{positive, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative threshold on `|Y| / |n + 1|²` below which the slab is treated as
/// degenerate.
pub const RESONANCE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    half_length: f64,
}

impl SlabGeometry {
    pub fn new(half_length: f64) -> Result<Self> {
        positive("half_length", half_length).map(|half_length| Self { half_length })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn region_of(&self, x: f64) -> Region {
        if x < -self.half_length {
            Region::Left
        } else if x > self.half_length {
            Region::Right
        } else {
            Region::Inside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Left,
    Inside,
    Right,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Left => "left",
            Region::Inside => "inside",
            Region::Right => "right",
        })
    }
}

/// Amplitudes of the slab solution; `y` is the Fabry–Pérot denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub y: Complex64,
}

impl SlabCoefficients {
    /// `|A|² + |D|²`: transmitted plus reflected power fraction.
    pub fn transmitted_plus_reflected(&self) -> f64 {
        self.a.norm_sqr() + self.d.norm_sqr()
    }

    /// `1 − |A|² − |D|²`: the fraction absorbed in the slab.
    pub fn absorbed(&self) -> f64 {
        1.0 - self.transmitted_plus_reflected()
    }
}

/// Slab amplitudes for index `n` at wavenumber `k`.
pub fn coefficients(
    geometry: SlabGeometry,
    n: RefractiveIndex,
    k: f64,
) -> Result<SlabCoefficients> {
    positive("k", k)?;
    let l = geometry.half_length;
    let n = n.value();
    let one = Complex64::new(1.0, 0.0);
    let phase = |m: Complex64| (I * k * m * l).exp();
    let e4 = phase(4.0 * n);
    let y = (n + one).powi(2) - (n - one).powi(2) * e4;
    if y.norm() < RESONANCE_GUARD * (n + one).norm_sqr() {
        return Err(Error::NearResonance {
            magnitude: y.norm(),
        });
    }
    Ok(SlabCoefficients {
        a: 4.0 * n * phase(2.0 * n) / y,
        b: 2.0 * (n + one) * phase(n - one) / y,
        c: 2.0 * (n - one) * phase(3.0 * n - one) / y,
        d: (n * n - one) * (e4 - one) / y,
        y,
    })
}

/// One `(geometry, material, frequency)` evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveContext {
    omega: f64,
    k: f64,
    epsilon: Complex64,
    n: RefractiveIndex,
    geometry: SlabGeometry,
    coefficients: SlabCoefficients,
}

impl WaveContext {
    /// Evaluates `model` at `omega`; `k = omega / c`.
    pub fn new(
        geometry: SlabGeometry,
        model: &DielectricModel,
        omega: f64,
        c: f64,
    ) -> Result<Self> {
        let epsilon = model.permittivity(omega)?;
        Self::from_epsilon(geometry, epsilon, omega, c)
    }

    pub fn from_epsilon(
        geometry: SlabGeometry,
        epsilon: Complex64,
        omega: f64,
        c: f64,
    ) -> Result<Self> {
        positive("omega", omega)?;
        positive("c", c)?;
        let n = refractive_index(epsilon)?;
        let k = omega / c;
        Ok(Self {
            omega,
            k,
            epsilon,
            n,
            geometry,
            coefficients: coefficients(geometry, n, k)?,
        })
    }

    /// Natural units (`c = 1`, so `omega = k`) from a refractive index.
    pub fn from_index(geometry: SlabGeometry, n: RefractiveIndex, k: f64) -> Result<Self> {
        positive("k", k)?;
        Ok(Self {
            omega: k,
            k,
            epsilon: n.epsilon(),
            n,
            geometry,
            coefficients: coefficients(geometry, n, k)?,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }

    pub fn index(&self) -> RefractiveIndex {
        self.n
    }

    pub fn geometry(&self) -> SlabGeometry {
        self.geometry
    }

    pub fn half_length(&self) -> f64 {
        self.geometry.half_length
    }

    pub fn coefficients(&self) -> &SlabCoefficients {
        &self.coefficients
    }

    /// Permittivity profile: `ε` inside the slab, 1 outside.
    pub fn epsilon_at(&self, x: f64) -> Complex64 {
        match self.geometry.region_of(x) {
            Region::Inside => self.epsilon,
            _ => Complex64::new(1.0, 0.0),
        }
    }

    pub(crate) fn require_right(&self, x: f64) -> Result<()> {
        if x > self.half_length() && x.is_finite() {
            Ok(())
        } else {
            Err(Error::NotRightRegion {
                x,
                half_length: self.half_length(),
            })
        }
    }

    /// Value and `∂ₓ` of the closed form for `region`, evaluated at any `x`
    /// (not only inside that region). The source must satisfy `x_s > ℓ`.
    ///
    /// At `x == x_s` the derivative of the direct term is taken as the mean of
    /// its one-sided limits, i.e. zero.
    pub fn branch(&self, region: Region, x: f64, x_s: f64) -> Result<(Complex64, Complex64)> {
        self.require_right(x_s)?;
        Ok(self.branch_unchecked(region, x, x_s))
    }

    fn branch_unchecked(&self, region: Region, x: f64, x_s: f64) -> (Complex64, Complex64) {
        let k = self.k;
        let l = self.half_length();
        let n = self.n.value();
        let co = &self.coefficients;
        let pre = I / (2.0 * k);
        match region {
            Region::Left => {
                let v = co.a * (-I * k * (2.0 * l + x - x_s)).exp();
                (pre * v, pre * (-I * k) * v)
            }
            Region::Inside => {
                let down = co.b * (-I * k * (n * x - x_s)).exp();
                let up = co.c * (I * k * (n * x + x_s)).exp();
                (pre * (down + up), pre * I * k * n * (up - down))
            }
            Region::Right => {
                let reflected = co.d * (-I * k * (2.0 * l - x - x_s)).exp();
                let direct = (I * k * (x - x_s).abs()).exp();
                let sign = if x > x_s {
                    1.0
                } else if x < x_s {
                    -1.0
                } else {
                    0.0
                };
                (
                    pre * (reflected + direct),
                    pre * I * k * (reflected + sign * direct),
                )
            }
        }
    }

    fn mirrored(&self, x: f64, x_s: f64) -> Result<(f64, f64, f64)> {
        let l = self.half_length();
        if !x_s.is_finite() || x_s.abs() <= l {
            return Err(Error::SourceInsideSlab {
                x_s,
                half_length: l,
            });
        }
        if !x.is_finite() {
            return Err(Error::Domain {
                quantity: "x",
                value: x,
                reason: "observer position must be finite",
            });
        }
        // (x, x_s, sign of d/dx under the map)
        Ok(if x_s > l {
            (x, x_s, 1.0)
        } else {
            (-x, -x_s, -1.0)
        })
    }

    /// `G(x, x_s)` for an exterior source `|x_s| > ℓ` and any observer `x`.
    pub fn green(&self, x: f64, x_s: f64) -> Result<GreenEval> {
        let (xm, sm, _) = self.mirrored(x, x_s)?;
        let (value, _) = self.branch_unchecked(self.geometry.region_of(xm), xm, sm);
        Ok(GreenEval {
            value,
            observer_region: self.geometry.region_of(x),
            source_region: self.geometry.region_of(x_s),
        })
    }

    /// `∂ₓ G(x, x_s)` from the analytic derivative of the closed form.
    pub fn green_derivative(&self, x: f64, x_s: f64) -> Result<Complex64> {
        let (xm, sm, sign) = self.mirrored(x, x_s)?;
        let (_, dg) = self.branch_unchecked(self.geometry.region_of(xm), xm, sm);
        Ok(sign * dg)
    }

    /// Largest mismatch of `G` or `∂ₓG` between neighbouring branches at `±ℓ`.
    pub fn interface_mismatch(&self, x_s: f64) -> Result<f64> {
        self.require_right(x_s)?;
        let l = self.half_length();
        let mut worst = 0.0f64;
        for (x, outside) in [(l, Region::Right), (-l, Region::Left)] {
            let (g_in, dg_in) = self.branch_unchecked(Region::Inside, x, x_s);
            let (g_out, dg_out) = self.branch_unchecked(outside, x, x_s);
            worst = worst
                .max((g_in - g_out).norm())
                .max((dg_in - dg_out).norm());
        }
        Ok(worst)
    }

    /// Magnitude of `-G'' - k²ε(x)G` from a second-order central difference.
    pub fn helmholtz_residual(&self, x: f64, x_s: f64, h: f64) -> Result<f64> {
        positive("h", h)?;
        let l = self.half_length();
        for at in [x_s, l, -l] {
            if (x - at).abs() < 2.0 * h {
                return Err(Error::StencilCrossesDiscontinuity { x, h, at });
            }
        }
        let g = |p: f64| self.green(p, x_s).map(|e| e.value);
        let (gm, g0, gp) = (g(x - h)?, g(x)?, g(x + h)?);
        let minus_second = (2.0 * g0 - gp - gm) / (h * h);
        Ok((minus_second - self.k * self.k * self.epsilon_at(x) * g0).norm())
    }
}

/// A Green-function value with the regions of observer and source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEval {
    pub value: Complex64,
    pub observer_region: Region,
    pub source_region: Region,
}

/// Vacuum Green function `(i/2k) e^{ik|x - x'|}`.
pub fn green_vacuum_1d(x: f64, x_prime: f64, k: f64) -> Result<Complex64> {
    positive("k", k)?;
    Ok(I / (2.0 * k) * (I * k * (x - x_prime).abs()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(n: Complex64, k: f64, l: f64) -> WaveContext {
        let n = refractive_index(n * n).unwrap();
        WaveContext::from_index(SlabGeometry::new(l).unwrap(), n, k).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_slab_coefficients() {
        let co = *ctx(c(1.0, 0.0), 1.0, 1.0).coefficients();
        assert!((co.y - c(4.0, 0.0)).norm() < 1e-15);
        assert!((co.a - (I * 2.0).exp()).norm() < 1e-15);
        assert!((co.b - c(1.0, 0.0)).norm() < 1e-15);
        assert!(co.c.norm() < 1e-15);
        assert!(co.d.norm() < 1e-15);
    }

    #[test]
    fn y_matches_its_definition_and_phase_is_bounded() {
        for (n, kl) in [(c(2.0, 0.5), 1.0), (c(0.1, 3.0), 0.7), (c(1.5, 0.0), 3.3)] {
            let cx = ctx(n, kl, 1.0);
            let e4 = (I * 4.0 * kl * n).exp();
            let one = c(1.0, 0.0);
            let y = (n + one).powi(2) - (n - one).powi(2) * e4;
            assert!((cx.coefficients().y - y).norm() <= 1e-14 * y.norm());
            assert!(e4.norm() <= 1.0);
        }
    }

    #[test]
    fn lossless_slab_is_unitary_and_lossy_absorbs() {
        let co = *ctx(c(2.0, 0.0), 1.0, 1.0).coefficients();
        assert!((co.transmitted_plus_reflected() - 1.0).abs() < 1e-12);
        let lossy = ctx(c(2.0, 0.5), 1.0, 1.0);
        assert!(lossy.coefficients().transmitted_plus_reflected() < 1.0);
        assert!(lossy.interface_mismatch(2.0).unwrap() < 1e-12);
    }

    #[test]
    fn metal_like_index_satisfies_continuity() {
        let cx = ctx(c(0.1, 3.0), 1.0, 1.0);
        let max_g = [-1.0, 1.0, 2.0]
            .into_iter()
            .map(|x| cx.green(x, 2.0).unwrap().value.norm())
            .fold(0.0, f64::max);
        assert!(cx.interface_mismatch(2.0).unwrap() <= 1e-12 * max_g);
        let vac = ctx(c(1.0, 0.0), 1.0, 1.0);
        assert!(vac.interface_mismatch(2.0).unwrap() < 1e-15);
    }

    #[test]
    fn vacuum_limit_of_all_branches() {
        let cx = ctx(c(1.0, 0.0), 1.3, 0.8);
        for x_s in [0.9, 2.5, -1.7] {
            for x in [-3.0, -0.8, -0.2, 0.0, 0.5, 0.8, 1.1, 2.5, 6.0] {
                let g = cx.green(x, x_s).unwrap().value;
                let g0 = green_vacuum_1d(x, x_s, 1.3).unwrap();
                assert!((g - g0).norm() < 1e-15, "x={x} x_s={x_s}");
            }
        }
    }

    #[test]
    fn imaginary_part_at_coincidence() {
        let cx = ctx(c(2.0, 0.5), 1.0, 1.0);
        let d = cx.coefficients().d;
        for x_s in [1.2, 2.0, 4.5] {
            let g = cx.green(x_s, x_s).unwrap().value;
            let expected = 0.5 * (1.0 + (d * (-I * 2.0 * (1.0 - x_s)).exp()).re);
            assert!((g.im - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn region_tags() {
        let cx = ctx(c(2.0, 0.5), 1.0, 1.0);
        let e = cx.green(-2.0, 3.0).unwrap();
        assert_eq!(
            (e.observer_region, e.source_region),
            (Region::Left, Region::Right)
        );
        let e = cx.green(0.3, -3.0).unwrap();
        assert_eq!(
            (e.observer_region, e.source_region),
            (Region::Inside, Region::Left)
        );
        let e = cx.green(1.0, 3.0).unwrap();
        assert_eq!(e.observer_region, Region::Inside);
    }

    #[test]
    fn sources_inside_the_slab_are_rejected() {
        let cx = ctx(c(2.0, 0.5), 1.0, 1.0);
        for x_s in [0.0, 1.0, -1.0, 0.5] {
            assert!(matches!(
                cx.green(2.0, x_s),
                Err(Error::SourceInsideSlab { .. })
            ));
        }
        assert!(cx.interface_mismatch(-2.0).is_err());
    }

    #[test]
    fn vacuum_1d_examples() {
        assert!((green_vacuum_1d(0.3, 0.3, 1.0).unwrap() - c(0.0, 0.5)).norm() < 1e-16);
        let g = green_vacuum_1d(std::f64::consts::PI, 0.0, 1.0).unwrap();
        assert!((g - c(0.0, -0.5)).norm() < 1e-15);
        assert_eq!(green_vacuum_1d(1.0, 1.0, 2.0).unwrap().im, 0.25);
        assert!(green_vacuum_1d(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn helmholtz_residual_vacuum_is_second_order_small() {
        let k = 1.0;
        let cx = ctx(c(1.0, 0.0), k, 1.0);
        let h = 1e-3;
        for x in [3.0, 0.3, -2.0] {
            let r = cx.helmholtz_residual(x, 2.0, h).unwrap();
            let g = cx.green(x, 2.0).unwrap().value.norm();
            assert!(r <= 1.01 * k.powi(4) * g * h * h / 12.0, "x={x}: {r}");
        }
    }

    #[test]
    fn helmholtz_residual_converges_at_second_order() {
        let cx = ctx(c(2.0, 0.5), 1.0, 1.0);
        for x in [0.2, -0.6, 3.1, -2.4] {
            let r1 = cx.helmholtz_residual(x, 2.0, 1e-2).unwrap();
            let r2 = cx.helmholtz_residual(x, 2.0, 5e-3).unwrap();
            let order = (r1 / r2).log2();
            assert!((order - 2.0).abs() < 0.05, "x={x}: order {order}");
        }
    }

    #[test]
    fn helmholtz_stencil_must_avoid_singular_points() {
        let cx = ctx(c(2.0, 0.5), 1.0, 1.0);
        assert!(cx.helmholtz_residual(2.01, 2.0, 0.01).is_err());
        assert!(cx.helmholtz_residual(0.99, 2.0, 0.01).is_err());
        assert!(cx.helmholtz_residual(-1.015, 2.0, 0.01).is_err());
    }

    #[test]
    fn interface_mismatch_over_a_grid() {
        let indices = (0..10).map(|j| {
            let t = j as f64 / 9.0;
            c(0.1 + 3.9 * t, 3.0 * (1.0 - t) * t + 0.01 * j as f64)
        });
        for n in indices {
            for j in 0..10 {
                let kl = 0.1 + 0.99 * j as f64;
                let cx = ctx(n, kl, 1.0);
                for m in 0..10 {
                    let x_s = 1.05 + 0.5 * m as f64;
                    let max_g = [-1.0, 1.0, x_s]
                        .into_iter()
                        .map(|x| cx.green(x, x_s).unwrap().value.norm())
                        .fold(0.0, f64::max);
                    let mis = cx.interface_mismatch(x_s).unwrap();
                    assert!(mis <= 1e-12 * max_g, "n={n} kl={kl} x_s={x_s}: {mis}");
                }
            }
        }
    }

    #[test]
    fn radiation_condition_phase_gradient() {
        let cx = ctx(c(2.0, 0.5), 1.0, 1.0);
        let x_s = 2.0;
        // far right: G ∝ e^{ikx}, so d(arg G)/dx = +k
        let right = |x: f64| cx.green(x, x_s).unwrap().value;
        let left = |x: f64| cx.green(x, x_s).unwrap().value;
        let dh = 1e-4;
        let grad =
            |f: &dyn Fn(f64) -> Complex64, x: f64| (f(x + dh) / f(x - dh)).arg() / (2.0 * dh);
        assert!((grad(&right, 40.0) - 1.0).abs() < 1e-6);
        assert!((grad(&left, -40.0) + 1.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn reciprocity_and_mirror_symmetry(
            nr in 0.05f64..4.0, ni in 0.0f64..3.0, k in 0.1f64..5.0, l in 0.1f64..3.0,
            a in 0.01f64..5.0, b in 0.01f64..5.0, x in -8.0f64..8.0,
        ) {
            let cx = ctx(c(nr, ni), k, l);
            let (xa, xb) = (l + a, l + b);
            let gab = cx.green(xa, xb).unwrap().value;
            let gba = cx.green(xb, xa).unwrap().value;
            prop_assert!((gab - gba).norm() <= 1e-14 * gab.norm().max(1e-300));
            // across the slab: source left, observer right and vice versa
            let g1 = cx.green(-xa, xb).unwrap().value;
            let g2 = cx.green(xb, -xa).unwrap().value;
            prop_assert!((g1 - g2).norm() <= 1e-13 * g1.norm().max(1e-300));
            let g = cx.green(x, xa).unwrap().value;
            let gm = cx.green(-x, -xa).unwrap().value;
            prop_assert_eq!(g, gm);
            let d = cx.green_derivative(x, xa).unwrap();
            let dm = cx.green_derivative(-x, -xa).unwrap();
            prop_assert_eq!(d, -dm);
        }
    }
}
