//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.
//!
//! The interval is first cut into a caller-chosen number of equal panels,
//! then the panel with the largest `|K15 − G7|` is bisected until the summed
//! estimate drops below the absolute tolerance or the panel budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Tabulated Gauss–Kronrod 7/15 constants, kept at their published precision.
#[allow(clippy::excessive_precision)]
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
/// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Absolute tolerance on the summed error estimate.
    pub tol: f64,
    /// Number of equal panels before adaptation starts.
    pub initial_panels: usize,
    /// Upper bound on the number of panels.
    pub max_panels: usize,
}

impl QuadratureOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            initial_panels: 1,
            max_panels: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f0 = f(center);
    let mut kronrod = f0 * KRONROD_WEIGHTS[7];
    let mut gauss = f0 * GAUSS_WEIGHTS[3];
    for j in 0..7 {
        let dx = half * KRONROD_NODES[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * KRONROD_WEIGHTS[j];
        if j % 2 == 1 {
            gauss += pair * GAUSS_WEIGHTS[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

/// Integrates `f` over `[a, b]`.
///
/// On failure the error carries the best estimate found within the budget.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(Error::Domain {
            quantity: "tol",
            value: opts.tol,
            reason: "must be finite and strictly positive",
        });
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain {
            quantity: "upper bound",
            value: b,
            reason: "integration bounds must be finite with a < b",
        });
    }
    let initial = opts.initial_panels.max(1);
    let max_panels = opts.max_panels.max(initial);
    let width = (b - a) / initial as f64;

    let mut heap: BinaryHeap<Panel> = (0..initial)
        .map(|j| {
            let lo = a + width * j as f64;
            let hi = if j + 1 == initial {
                b
            } else {
                a + width * (j + 1) as f64
            };
            kronrod(&f, lo, hi)
        })
        .collect();
    let mut evaluations = 15 * initial;

    loop {
        let total_error: f64 = heap.iter().map(|p| p.error).sum();
        if total_error <= opts.tol || heap.len() >= max_panels {
            let mut panels = heap.into_vec();
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let value = panels.iter().map(|p| p.value).sum();
            let integral = Integral {
                value,
                error_estimate: total_error,
                panels: panels.len(),
                evaluations,
            };
            return if total_error <= opts.tol {
                Ok(integral)
            } else {
                Err(Error::QuadratureFailure {
                    best: value,
                    error_estimate: total_error,
                    tol: opts.tol,
                    panels: integral.panels,
                })
            };
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // panel can no longer be split in floating point
            let mut stuck = worst;
            stuck.error = 0.0;
            heap.push(stuck);
            let remaining: f64 = heap.iter().map(|p| p.error).sum();
            if remaining == 0.0 {
                return Err(Error::QuadratureFailure {
                    best: heap.iter().map(|p| p.value).sum(),
                    error_estimate: total_error,
                    tol: opts.tol,
                    panels: heap.len(),
                });
            }
            continue;
        }
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
        evaluations += 30;
    }
}
