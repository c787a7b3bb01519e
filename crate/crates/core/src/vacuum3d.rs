//! Free-space dyadic Green tensor and the vacuum decay rate `Γ₀`.
//!
//! `G₀(r_A, r_B) = (𝟙 + ∇∇/k²) g₀(|r_A − r_B|)` with
//! `g₀(R) = e^{ikR}/(4πR)` and `k = ω/c`, i.e. the outgoing solution of
//! `∇×∇×G − k²G = 𝟙δ`. Its real part diverges at coincidence; only the
//! imaginary part has a finite limit, `(k/6π)𝟙`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::emission::EmissionParams;
use crate::error::{positive, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub type Vec3 = [f64; 3];

fn separation(r_a: Vec3, r_b: Vec3) -> Result<(f64, Vec3)> {
    let d = [r_a[0] - r_b[0], r_a[1] - r_b[1], r_a[2] - r_b[2]];
    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if !r.is_finite() {
        return Err(Error::Domain {
            quantity: "separation",
            value: r,
            reason: "positions must be finite",
        });
    }
    if r == 0.0 {
        return Err(Error::Singular);
    }
    Ok((r, [d[0] / r, d[1] / r, d[2] / r]))
}

fn non_negative_wavenumber(k: f64) -> Result<f64> {
    if k.is_finite() && k >= 0.0 {
        Ok(k)
    } else {
        Err(Error::Domain {
            quantity: "k",
            value: k,
            reason: "wavenumber must be finite and non-negative",
        })
    }
}

/// `e^{ikR}/(4πR)` with `k = ω/c`; `k = 0` gives the static kernel.
pub fn scalar_green_g0(k: f64, r_a: Vec3, r_b: Vec3) -> Result<Complex64> {
    non_negative_wavenumber(k)?;
    let (r, _) = separation(r_a, r_b)?;
    Ok((I * k * r).exp() / (4.0 * PI * r))
}

/// `∂²g₀/∂r_A^i ∂r_B^j`, analytically. Since `g₀` depends on `r_A − r_B`
/// this equals `−∂_i∂_j g₀(R)`.
pub fn mixed_second_derivative(
    k: f64,
    r_a: Vec3,
    r_b: Vec3,
    i: usize,
    j: usize,
) -> Result<Complex64> {
    let g = scalar_green_g0(k, r_a, r_b)?;
    let (r, u) = separation(r_a, r_b)?;
    let q = I * k - 1.0 / r;
    let first = g * q;
    let second = g * (q * q + 1.0 / (r * r));
    let delta = if i == j { 1.0 } else { 0.0 };
    let radial = u[i] * u[j];
    Ok(-(second * radial + first / r * (delta - radial)))
}

/// A 3×3 complex tensor evaluated at one `(k, r_A, r_B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicGreen {
    pub components: [[Complex64; 3]; 3],
    pub wavenumber: f64,
    pub r_a: Vec3,
    pub r_b: Vec3,
}

impl DyadicGreen {
    pub fn transpose(&self) -> [[Complex64; 3]; 3] {
        let m = &self.components;
        std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
    }

    pub fn imaginary(&self) -> [[f64; 3]; 3] {
        self.components.map(|row| row.map(|z| z.im))
    }
}

/// `G₀^{ij} = δ_ij g₀ − (1/k²) ∂²g₀/∂r_A^i∂r_B^j`.
pub fn green_tensor_vacuum(k: f64, r_a: Vec3, r_b: Vec3) -> Result<DyadicGreen> {
    positive("k", k)?;
    let g = scalar_green_g0(k, r_a, r_b)?;
    let mut components = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in components.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let delta = if i == j { g } else { Complex64::new(0.0, 0.0) };
            *entry = delta - mixed_second_derivative(k, r_a, r_b, i, j)? / (k * k);
        }
    }
    Ok(DyadicGreen {
        components,
        wavenumber: k,
        r_a,
        r_b,
    })
}

/// `lim_{r_A → r_B} Im G₀ = (k/6π) 𝟙`.
pub fn im_green_coincident(k: f64) -> Result<[[f64; 3]; 3]> {
    positive("k", k)?;
    let v = k / (6.0 * PI);
    Ok([[v, 0.0, 0.0], [0.0, v, 0.0], [0.0, 0.0, v]])
}

/// `Γ₀ = ω₀³|d|² / (3πħε₀c³)`.
pub fn vacuum_decay_3d(params: &EmissionParams) -> f64 {
    let c = params.constants();
    params.transition_frequency().powi(3) * params.dipole_moment().powi(2)
        / (3.0 * PI * c.hbar * c.epsilon0 * c.c.powi(3))
}

/// `Γ₀` as `(2ω₀²/ħε₀c²) d·Im G₀(r, r)·d` for a dipole along `direction`.
pub fn vacuum_decay_3d_contraction(params: &EmissionParams, direction: Vec3) -> Result<f64> {
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Domain {
            quantity: "|direction|",
            value: norm,
            reason: "dipole direction must be a finite non-zero vector",
        });
    }
    let d = direction.map(|v| params.dipole_moment() * v / norm);
    let im = im_green_coincident(params.wavenumber())?;
    let mut quad = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            quad += d[i] * im[i][j] * d[j];
        }
    }
    let c = params.constants();
    Ok(2.0 * params.transition_frequency().powi(2) / (c.hbar * c.epsilon0 * c.c * c.c) * quad)
}
