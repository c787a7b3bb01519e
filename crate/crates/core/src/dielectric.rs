//! Complex permittivity models and the refractive-index branch.
//!
//! Every model implements [`Permittivity`]. Models are registered by name in a
//! [`DielectricRegistry`] so configuration files can pick one through a
//! `"type"` discriminator. All built-in models are passive: `Im ε(ω) >= 0`
//! for every `ω > 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{positive, Error, Result};

/// A frequency-dependent complex permittivity.
///
/// Implementations may assume `omega` is finite and strictly positive; the
/// [`DielectricModel`] wrapper checks that before delegating.
pub trait Permittivity: Send + Sync + fmt::Debug {
    /// Registry name of the model family.
    fn kind(&self) -> &'static str;

    fn permittivity(&self, omega: f64) -> Result<Complex64>;
}

/// Shared handle to a permittivity model.
#[derive(Clone, Debug)]
pub struct DielectricModel(Arc<dyn Permittivity>);

impl DielectricModel {
    pub fn new<P: Permittivity + 'static>(model: P) -> Self {
        Self(Arc::new(model))
    }

    pub fn constant(epsilon: Complex64) -> Result<Self> {
        Constant::new(epsilon).map(Self::new)
    }

    pub fn vacuum() -> Self {
        Self::new(Constant {
            epsilon: Complex64::new(1.0, 0.0),
        })
    }

    pub fn drude(plasma_frequency: f64, damping: f64) -> Result<Self> {
        Drude::new(plasma_frequency, damping).map(Self::new)
    }

    pub fn drude_lorentz(terms: Vec<LorentzTerm>) -> Result<Self> {
        DrudeLorentz::new(terms).map(Self::new)
    }

    pub fn tabulated(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        Tabulated::new(samples).map(Self::new)
    }

    /// Builds a model from a JSON description using the built-in registry.
    pub fn from_json(description: &Value) -> Result<Self> {
        DielectricRegistry::with_builtins().build(description)
    }

    pub fn kind(&self) -> &'static str {
        self.0.kind()
    }

    /// `ε(ω)`; `ω` must be finite and strictly positive.
    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        positive("omega", omega)?;
        self.0.permittivity(omega)
    }
}

/// Frequency-independent permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant {
    epsilon: Complex64,
}

impl Constant {
    pub fn new(epsilon: Complex64) -> Result<Self> {
        if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "constant: non-finite epsilon {epsilon}"
            )));
        }
        if epsilon.im < 0.0 {
            return Err(Error::InvalidModel(format!(
                "constant: Im epsilon = {} < 0 describes a gain medium",
                epsilon.im
            )));
        }
        Ok(Self { epsilon })
    }
}

impl Permittivity for Constant {
    fn kind(&self) -> &'static str {
        "constant"
    }

    fn permittivity(&self, _omega: f64) -> Result<Complex64> {
        Ok(self.epsilon)
    }
}

/// Free-electron model `1 - ωp² / (ω² + iγω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drude {
    plasma_frequency: f64,
    damping: f64,
}

impl Drude {
    pub fn new(plasma_frequency: f64, damping: f64) -> Result<Self> {
        if !(plasma_frequency.is_finite() && plasma_frequency >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "drude: plasma_frequency must be finite and >= 0, got {plasma_frequency}"
            )));
        }
        if !(damping.is_finite() && damping >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "drude: damping must be finite and >= 0, got {damping}"
            )));
        }
        Ok(Self {
            plasma_frequency,
            damping,
        })
    }
}

impl Permittivity for Drude {
    fn kind(&self) -> &'static str {
        "drude"
    }

    fn permittivity(&self, omega: f64) -> Result<Complex64> {
        let wp2 = self.plasma_frequency * self.plasma_frequency;
        Ok(Complex64::new(1.0, 0.0) - wp2 / Complex64::new(omega * omega, self.damping * omega))
    }
}

/// One oscillator of a [`DrudeLorentz`] sum.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzTerm {
    /// Oscillator plasma frequency Ω (rad/s); the term weight is Ω².
    pub strength: f64,
    /// Resonance frequency ω_j (rad/s). Zero gives a Drude term.
    pub resonance: f64,
    /// Damping γ_j (rad/s).
    pub damping: f64,
}

/// `1 + Σ_j Ω_j² / (ω_j² − ω² − iγ_j ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrudeLorentz {
    terms: Vec<LorentzTerm>,
}

impl DrudeLorentz {
    pub fn new(terms: Vec<LorentzTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidModel(
                "drude_lorentz: at least one term is required".into(),
            ));
        }
        for (j, t) in terms.iter().enumerate() {
            let ok = |v: f64| v.is_finite() && v >= 0.0;
            if !(ok(t.strength) && ok(t.resonance) && ok(t.damping)) {
                return Err(Error::InvalidModel(format!(
                    "drude_lorentz: term {j} must have finite, non-negative strength, resonance and damping"
                )));
            }
        }
        Ok(Self { terms })
    }
}

impl Permittivity for DrudeLorentz {
    fn kind(&self) -> &'static str {
        "drude_lorentz"
    }

    fn permittivity(&self, omega: f64) -> Result<Complex64> {
        Ok(self.terms.iter().fold(Complex64::new(1.0, 0.0), |acc, t| {
            let denom = Complex64::new(
                t.resonance * t.resonance - omega * omega,
                -t.damping * omega,
            );
            acc + t.strength * t.strength / denom
        }))
    }
}

/// Piecewise-linear interpolation of sampled `ε(ω)`; no extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    omega: Vec<f64>,
    epsilon: Vec<Complex64>,
}

impl Tabulated {
    pub fn new(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidModel(format!(
                "tabulated: at least 2 samples are required, got {}",
                samples.len()
            )));
        }
        for (j, (w, e)) in samples.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0 && e.re.is_finite() && e.im.is_finite()) {
                return Err(Error::InvalidModel(format!(
                    "tabulated: sample {j} must have finite omega > 0 and finite epsilon"
                )));
            }
            if e.im < 0.0 {
                return Err(Error::InvalidModel(format!(
                    "tabulated: sample {j} has Im epsilon = {} < 0",
                    e.im
                )));
            }
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidModel(
                "tabulated: sample frequencies must be strictly increasing".into(),
            ));
        }
        let (omega, epsilon) = samples.into_iter().unzip();
        Ok(Self { omega, epsilon })
    }
}

impl Permittivity for Tabulated {
    fn kind(&self) -> &'static str {
        "tabulated"
    }

    fn permittivity(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = (self.omega[0], self.omega[self.omega.len() - 1]);
        if !(min..=max).contains(&omega) {
            return Err(Error::OutOfRange { omega, min, max });
        }
        // first index with omega[i] >= omega, clamped so [i-1, i] is a valid segment
        let i = self.omega.partition_point(|&w| w < omega).max(1);
        let (w0, w1) = (self.omega[i - 1], self.omega[i]);
        let t = (omega - w0) / (w1 - w0);
        let (e0, e1) = (self.epsilon[i - 1], self.epsilon[i]);
        Ok(Complex64::new(
            e0.re + t * (e1.re - e0.re),
            e0.im + t * (e1.im - e0.im),
        ))
    }
}

type Builder = fn(Value) -> Result<DielectricModel>;

/// Name → constructor table for permittivity models.
#[derive(Clone)]
pub struct DielectricRegistry {
    builders: BTreeMap<&'static str, Builder>,
}

impl fmt::Debug for DielectricRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.builders.keys()).finish()
    }
}

fn parse<T: DeserializeOwned>(kind: &str, params: Value) -> Result<T> {
    serde_json::from_value(params).map_err(|e| Error::InvalidModel(format!("{kind}: {e}")))
}

fn build_constant(params: Value) -> Result<DielectricModel> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct P {
        epsilon: Complex64,
    }
    let p: P = parse("constant", params)?;
    DielectricModel::constant(p.epsilon)
}

fn build_drude(params: Value) -> Result<DielectricModel> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct P {
        plasma_frequency: f64,
        damping: f64,
    }
    let p: P = parse("drude", params)?;
    DielectricModel::drude(p.plasma_frequency, p.damping)
}

fn build_drude_lorentz(params: Value) -> Result<DielectricModel> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct P {
        terms: Vec<LorentzTerm>,
    }
    let p: P = parse("drude_lorentz", params)?;
    DielectricModel::drude_lorentz(p.terms)
}

fn build_tabulated(params: Value) -> Result<DielectricModel> {
    /// Samples are `[omega, re, im]` triples.
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct P {
        samples: Vec<(f64, f64, f64)>,
    }
    let p: P = parse("tabulated", params)?;
    DielectricModel::tabulated(
        p.samples
            .into_iter()
            .map(|(w, re, im)| (w, Complex64::new(re, im)))
            .collect(),
    )
}

impl DielectricRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    /// Registry holding `constant`, `drude`, `drude_lorentz` and `tabulated`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("constant", build_constant);
        r.register("drude", build_drude);
        r.register("drude_lorentz", build_drude_lorentz);
        r.register("tabulated", build_tabulated);
        r
    }

    /// Adds or replaces a builder. The builder receives the JSON object with
    /// the `"type"` key removed.
    pub fn register(&mut self, name: &'static str, builder: Builder) {
        self.builders.insert(name, builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.keys().copied()
    }

    pub fn build(&self, description: &Value) -> Result<DielectricModel> {
        let mut object = description
            .as_object()
            .cloned()
            .ok_or_else(|| Error::InvalidModel("expected a JSON object".into()))?;
        let kind = match object.remove("type") {
            Some(Value::String(s)) => s,
            Some(other) => {
                return Err(Error::InvalidModel(format!(
                    "\"type\" must be a string, got {other}"
                )))
            }
            None => return Err(Error::InvalidModel("missing \"type\" discriminator".into())),
        };
        let builder = self
            .builders
            .get(kind.as_str())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "dielectric model",
                name: kind.clone(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })?;
        builder(Value::Object(object))
    }
}

impl Default for DielectricRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// Complex refractive index `n` with `n² = ε`, `Im n >= 0`, and `Re n >= 0`
/// whenever `Im n = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractiveIndex(Complex64);

impl RefractiveIndex {
    /// Wraps an index that already satisfies the branch rule.
    pub fn new(n: Complex64) -> Result<Self> {
        if !(n.re.is_finite() && n.im.is_finite()) || n == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateMedium(n * n));
        }
        if n.im < 0.0 || (n.im == 0.0 && n.re < 0.0) {
            return Err(Error::InvalidModel(format!(
                "refractive index {n} violates the Im n >= 0 branch"
            )));
        }
        Ok(Self(n))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn epsilon(self) -> Complex64 {
        self.0 * self.0
    }
}

/// Square root of `ε` on the branch where waves decay into the medium.
pub fn refractive_index(epsilon: Complex64) -> Result<RefractiveIndex> {
    if epsilon == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateMedium(epsilon));
    }
    if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "non-finite permittivity {epsilon}"
        )));
    }
    let mut n = epsilon.sqrt();
    if n.im < 0.0 || (n.im == 0.0 && n.re < 0.0) {
        n = -n;
    }
    // normalise signed zeros so the branch test in `new` is exact
    n = Complex64::new(n.re + 0.0, n.im + 0.0);
    Ok(RefractiveIndex(n))
}
