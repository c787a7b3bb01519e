//! Subcommand bodies. Each returns a [`Table`] whose last column is `status`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dielectric::{DielectricModel, DielectricRegistry};
use crate::emission::{self, oscillation_period, EmissionParams, RateOptions, RateRegistry};
use crate::identity::identity_report;
use crate::slab_green::{SlabGeometry, WaveContext};
use crate::vacuum3d::{
    green_tensor_vacuum, im_green_coincident, vacuum_decay_3d, vacuum_decay_3d_contraction,
};

use super::config::{Axis, RunConfig};
use super::table::format_float as f;
use super::{CliError, Outcome, Session, SweepAxis, Table};

fn missing(field: &str) -> CliError {
    CliError::Validation(format!("{field}: required by this subcommand"))
}

fn axis<'a>(value: &'a Option<Axis>, field: &str) -> Result<&'a Axis, CliError> {
    value.as_ref().ok_or_else(|| missing(field))
}

fn model(config: &RunConfig) -> Result<DielectricModel, CliError> {
    let description = config
        .dielectric
        .as_ref()
        .ok_or_else(|| missing("dielectric"))?;
    DielectricRegistry::with_builtins()
        .build(description)
        .map_err(|e| CliError::Validation(format!("dielectric: {e}")))
}

fn half_lengths(config: &RunConfig) -> Result<Vec<f64>, CliError> {
    let slab = config.slab.as_ref().ok_or_else(|| missing("slab"))?;
    let points = slab.half_length.points("slab.half_length")?;
    for &l in &points {
        SlabGeometry::new(l).map_err(|e| CliError::Validation(format!("slab.half_length: {e}")))?;
    }
    Ok(points)
}

fn omegas(config: &RunConfig) -> Result<Vec<f64>, CliError> {
    let points = axis(&config.omega, "omega")?.points("omega")?;
    if let Some(w) = points.iter().find(|w| **w <= 0.0) {
        return Err(CliError::Validation(format!("omega: must be > 0, got {w}")));
    }
    Ok(points)
}

fn sources(config: &RunConfig, max_half_length: f64) -> Result<Vec<f64>, CliError> {
    let points = axis(&config.source, "source")?.points("source")?;
    if let Some(x) = points.iter().find(|x| **x <= max_half_length) {
        return Err(CliError::Validation(format!(
            "source: {x} must lie right of the slab (> {max_half_length})"
        )));
    }
    Ok(points)
}

fn params(session: &Session, omega: f64) -> Result<EmissionParams, CliError> {
    let e = &session.config.emission;
    EmissionParams::new(
        omega,
        e.dipole_moment,
        session.units.constants(),
        e.surface_unit,
    )
    .map_err(|err| CliError::Validation(format!("emission: {err}")))
}

fn complex(z: Complex64) -> [String; 2] {
    [f(z.re), f(z.im)]
}

fn status<T>(r: &Result<T, crate::Error>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => format!("error: {e}"),
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn coefficients(session: &Session) -> Result<Outcome, CliError> {
    let config = &session.config;
    let model = model(config)?;
    let c = session.units.constants().c;
    let ls = half_lengths(config)?;
    let jobs: Vec<(f64, f64)> = omegas(config)?
        .into_iter()
        .flat_map(|w| ls.iter().map(move |&l| (w, l)))
        .collect();

    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(w, l)| WaveContext::new(SlabGeometry::new(l)?, &model, w, c))
        .collect();

    let mut table = Table::new([
        "omega",
        "half_length",
        "k",
        "eps_re",
        "eps_im",
        "n_re",
        "n_im",
        "a_re",
        "a_im",
        "b_re",
        "b_im",
        "c_re",
        "c_im",
        "d_re",
        "d_im",
        "y_re",
        "y_im",
        "abs_a2",
        "abs_d2",
        "absorbed",
        "status",
    ]);
    let mut violations = 0;
    for (&(w, l), r) in jobs.iter().zip(&results) {
        let mut cells = vec![f(w), f(l)];
        if let Ok(ctx) = r {
            let co = ctx.coefficients();
            cells.push(f(ctx.k()));
            for z in [
                ctx.epsilon(),
                ctx.index().value(),
                co.a,
                co.b,
                co.c,
                co.d,
                co.y,
            ] {
                cells.extend(complex(z));
            }
            cells.extend([f(co.a.norm_sqr()), f(co.d.norm_sqr()), f(co.absorbed())]);
        } else {
            violations += 1;
        }
        table.push(cells, status(r));
    }
    Ok(Outcome {
        summary: vec![format!(
            "coefficients: {} row(s), {violations} failed",
            table.rows.len()
        )],
        table,
        violations,
    })
}

pub fn verify_identity(session: &Session) -> Result<Outcome, CliError> {
    let config = &session.config;
    let model = model(config)?;
    let c = session.units.constants().c;
    let ls = half_lengths(config)?;
    let xs = sources(config, max_of(&ls))?;
    let tol = session.tol;
    let mut jobs = Vec::new();
    for &w in &omegas(config)? {
        for &l in &ls {
            for &xa in &xs {
                for &xb in &xs {
                    jobs.push((w, l, xa, xb));
                }
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(w, l, xa, xb)| {
            let ctx = WaveContext::new(SlabGeometry::new(l)?, &model, w, c)?;
            identity_report(xa, xb, &ctx, tol)
        })
        .collect();

    let mut table = Table::new([
        "omega",
        "half_length",
        "x_a",
        "x_b",
        "lhs_re",
        "lhs_im",
        "im_g",
        "f_re",
        "f_im",
        "residual_corrected_re",
        "residual_corrected_im",
        "residual_corrected_abs",
        "residual_uncorrected_re",
        "residual_uncorrected_im",
        "quadrature_error",
        "bound",
        "status",
    ]);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for (&(w, l, xa, xb), r) in jobs.iter().zip(&results) {
        let mut cells = vec![f(w), f(l), f(xa), f(xb)];
        let state = match r {
            Ok(rep) => {
                cells.extend(complex(rep.lhs));
                cells.push(f(rep.im_g));
                cells.extend(complex(rep.f));
                cells.extend(complex(rep.residual_corrected));
                cells.push(f(rep.residual_corrected.norm()));
                cells.extend(complex(rep.residual_uncorrected));
                cells.extend([f(rep.quadrature_estimate_error), f(rep.bound(tol))]);
                worst = worst.max(rep.residual_corrected.norm());
                if rep.corrected_holds(tol) {
                    "ok".to_string()
                } else {
                    violations += 1;
                    "violation: |residual_corrected| exceeds bound".to_string()
                }
            }
            Err(e) => {
                violations += 1;
                format!("error: {e}")
            }
        };
        table.push(cells, state);
    }
    Ok(Outcome {
        summary: vec![format!(
            "verify-identity: {} row(s), max |lhs - Im G - F| = {worst:.3e}, tol = {tol:.1e}, {violations} violation(s)",
            table.rows.len()
        )],
        table,
        violations,
    })
}

pub fn decay_scan(session: &Session, sweep: SweepAxis) -> Result<Outcome, CliError> {
    let config = &session.config;
    let model = model(config)?;
    let c = session.units.constants().c;

    let single = |a: &Option<Axis>, field: &str, swept: bool| -> Result<(), CliError> {
        if !swept && !axis(a, field)?.is_single() {
            return Err(CliError::Validation(format!(
                "{field}: decay-scan --sweep {} needs a single value here",
                match sweep {
                    SweepAxis::Position => "position",
                    SweepAxis::Thickness => "thickness",
                    SweepAxis::Frequency => "frequency",
                }
            )));
        }
        Ok(())
    };
    single(&config.source, "source", sweep == SweepAxis::Position)?;
    single(
        &config.slab.as_ref().map(|s| s.half_length.clone()),
        "slab.half_length",
        sweep == SweepAxis::Thickness,
    )?;
    single(&config.omega, "omega", sweep == SweepAxis::Frequency)?;

    let ls = half_lengths(config)?;
    let xs = sources(config, max_of(&ls))?;
    let ws = omegas(config)?;
    let jobs: Vec<(f64, f64, f64)> = match sweep {
        SweepAxis::Position => xs.iter().map(|&x| (ws[0], ls[0], x)).collect(),
        SweepAxis::Thickness => ls.iter().map(|&l| (ws[0], l, xs[0])).collect(),
        SweepAxis::Frequency => ws.iter().map(|&w| (w, ls[0], xs[0])).collect(),
    };

    let registry = RateRegistry::with_builtins();
    let opts = RateOptions { tol: session.tol };
    let mut names = vec!["corrected", "uncorrected"];
    if session.oracle {
        names.push("quadrature");
    }
    let methods = names
        .iter()
        .map(|n| registry.create(n, &opts))
        .collect::<Result<Vec<_>, _>>()?;

    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(w, l, x)| -> crate::Result<(EmissionParams, Vec<f64>)> {
            let p = params(session, w).map_err(|e| crate::Error::InvalidModel(e.to_string()))?;
            let ctx = WaveContext::new(SlabGeometry::new(l)?, &model, w, c)?;
            let rates = methods
                .iter()
                .map(|m| m.rate(&p, &ctx, x))
                .collect::<crate::Result<Vec<_>>>()?;
            Ok((p, rates))
        })
        .collect();

    let mut header = vec![
        "omega".to_string(),
        "half_length".into(),
        "x_s".into(),
        "gamma_vac_1d".into(),
    ];
    for n in &names {
        header.push(format!("gamma_{n}"));
        header.push(format!("normalized_{n}"));
    }
    if session.oracle {
        header.push("oracle_abs_diff".into());
    }
    header.push("status".into());
    let mut table = Table::new(header);

    let mut violations = 0;
    let mut uncorrected = Vec::new();
    let mut corrected = Vec::new();
    for (&(w, l, x), r) in jobs.iter().zip(&results) {
        let mut cells = vec![f(w), f(l), f(x)];
        let state = match r {
            Ok((p, rates)) => {
                let vac = p.gamma_vac_1d();
                cells.push(f(vac));
                for g in rates {
                    cells.extend([f(*g), f(g / vac)]);
                }
                corrected.push(rates[0]);
                uncorrected.push((x, rates[1]));
                if session.oracle {
                    let diff = (rates[2] - rates[0]).abs();
                    cells.push(f(diff));
                    let bound = (1e-7 * rates[0].abs()).max(p.rate_prefactor() * session.tol);
                    if diff > bound {
                        violations += 1;
                        "violation: quadrature oracle disagrees".to_string()
                    } else {
                        "ok".to_string()
                    }
                } else {
                    "ok".to_string()
                }
            }
            Err(e) => {
                violations += 1;
                format!("error: {e}")
            }
        };
        table.push(cells, state);
    }

    let mut summary = vec![format!(
        "decay-scan: {} row(s), {violations} violation(s)",
        table.rows.len()
    )];
    if sweep == SweepAxis::Position && !corrected.is_empty() {
        let spread = max_of(&corrected) - corrected.iter().copied().fold(f64::INFINITY, f64::min);
        summary.push(format!(
            "decay-scan: spread of gamma_corrected over x_s = {spread:.3e}"
        ));
        let (px, py): (Vec<f64>, Vec<f64>) = uncorrected.into_iter().unzip();
        let k = ws[0] / c;
        match oscillation_period(&px, &py) {
            Some(p) => summary.push(format!(
                "decay-scan: gamma_uncorrected period = {p:.9e} (pi/k = {:.9e})",
                std::f64::consts::PI / k
            )),
            None => {
                summary.push("decay-scan: gamma_uncorrected shows no resolvable oscillation".into())
            }
        }
    }
    Ok(Outcome {
        table,
        summary,
        violations,
    })
}

pub fn limit_study(session: &Session) -> Result<Outcome, CliError> {
    let config = &session.config;
    let omega = axis(&config.omega, "omega")?;
    if !omega.is_single() {
        return Err(CliError::Validation(
            "omega: limit-study needs a single value".into(),
        ));
    }
    let slab = config.slab.as_ref().ok_or_else(|| missing("slab"))?;
    if !slab.half_length.is_single() {
        return Err(CliError::Validation(
            "slab.half_length: limit-study needs a single value".into(),
        ));
    }
    let source = axis(&config.source, "source")?;
    if !source.is_single() {
        return Err(CliError::Validation(
            "source: limit-study needs a single value".into(),
        ));
    }
    let l = half_lengths(config)?[0];
    let x_s = sources(config, l)?[0];
    let p = params(session, omegas(config)?[0])?;
    let path = config
        .limit_study
        .as_ref()
        .map(|s| s.path.clone())
        .unwrap_or_else(emission::default_limit_path);
    if path.is_empty() {
        return Err(CliError::Validation(
            "limit_study.path: must not be empty".into(),
        ));
    }
    let geometry = SlabGeometry::new(l)?;
    let rows = emission::limit_study(&p, geometry, &path, x_s);

    let mut table = Table::new([
        "eps_re",
        "eps_im",
        "gamma",
        "gamma_uncorrected",
        "f_plus_im_g0",
        "abs_a2",
        "abs_d2",
        "status",
    ]);
    let mut violations = 0;
    for row in &rows {
        let mut cells = complex(row.epsilon).to_vec();
        if let Ok(v) = &row.outcome {
            cells.extend([
                f(v.gamma),
                f(v.gamma_uncorrected),
                f(v.f_plus_im_g0),
                f(v.transmitted),
                f(v.reflected),
            ]);
        } else {
            violations += 1;
        }
        table.push(cells, status(&row.outcome));
    }
    let mut summary = vec![format!(
        "limit-study: {} row(s), {violations} failed",
        rows.len()
    )];
    if let Some(Ok(last)) = rows.last().map(|r| r.outcome.as_ref()) {
        summary.push(format!(
            "limit-study: final row gamma/gamma_vac_1d = {:.3e}, gamma_uncorrected/gamma_vac_1d = {:.6}",
            last.gamma / p.gamma_vac_1d(),
            last.gamma_uncorrected / p.gamma_vac_1d()
        ));
    }
    Ok(Outcome {
        table,
        summary,
        violations,
    })
}

pub fn tensor3d(session: &Session) -> Result<Outcome, CliError> {
    let config = &session.config;
    let spec = config
        .tensor3d
        .as_ref()
        .ok_or_else(|| missing("tensor3d"))?;
    if spec.separations.is_empty() {
        return Err(CliError::Validation(
            "tensor3d.separations: must not be empty".into(),
        ));
    }
    for (j, r) in spec.separations.iter().enumerate() {
        if r.iter().all(|v| *v == 0.0) {
            return Err(CliError::Validation(format!(
                "tensor3d.separations[{j}]: coincident points; the full tensor is singular there \
                 (only its imaginary part has a limit, reported as im_g_coincident)"
            )));
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Validation(format!(
                "tensor3d.separations[{j}]: must be finite"
            )));
        }
    }
    let c = session.units.constants().c;
    let ws = omegas(config)?;

    let mut header: Vec<String> = ["omega", "k", "rx", "ry", "rz"].map(String::from).to_vec();
    for i in ["x", "y", "z"] {
        for j in ["x", "y", "z"] {
            header.push(format!("g_{i}{j}_re"));
            header.push(format!("g_{i}{j}_im"));
        }
    }
    header.extend(
        [
            "im_g_coincident",
            "gamma0_closed",
            "gamma0_contraction",
            "status",
        ]
        .map(String::from),
    );
    let mut table = Table::new(header);

    let jobs: Vec<(f64, [f64; 3])> = ws
        .iter()
        .flat_map(|&w| spec.separations.iter().map(move |&r| (w, r)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(w, r)| -> Result<Vec<String>, CliError> {
            let p = params(session, w)?;
            let k = w / c;
            let t = green_tensor_vacuum(k, r, [0.0; 3])?;
            let mut cells = vec![f(w), f(k), f(r[0]), f(r[1]), f(r[2])];
            for row in t.components {
                for z in row {
                    cells.extend(complex(z));
                }
            }
            cells.push(f(im_green_coincident(k)?[0][0]));
            cells.push(f(vacuum_decay_3d(&p)));
            cells.push(f(vacuum_decay_3d_contraction(&p, spec.dipole_direction)?));
            Ok(cells)
        })
        .collect();
    for r in results {
        table.push(r?, "ok".into());
    }
    Ok(Outcome {
        summary: vec![format!("tensor3d: {} row(s)", table.rows.len())],
        table,
        violations: 0,
    })
}
