//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p slabgreen --test acceptance -- --nocapture`
//! (the harness is custom, so output is always shown).

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use slabgreen::emission::{
    decay_from_quadrature, decay_rate_corrected, decay_rate_uncorrected, oscillation_period,
    EmissionParams,
};
use slabgreen::identity::{boundary_term_b, boundary_term_f, identity_report};
use slabgreen::vacuum3d::{
    green_tensor_vacuum, im_green_coincident, vacuum_decay_3d, vacuum_decay_3d_contraction,
};
use slabgreen::{refractive_index, SlabGeometry, WaveContext};

const PI: f64 = std::f64::consts::PI;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn lossy(n: Complex64, k: f64, l: f64) -> WaveContext {
    let n = refractive_index(n * n).unwrap();
    WaveContext::from_index(SlabGeometry::new(l).unwrap(), n, k).unwrap()
}

fn require(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn corrected_identity() -> Check {
    let ctx = lossy(Complex64::new(2.0, 0.5), 1.0, 1.0);
    let start = Instant::now();
    let rep = identity_report(2.0, 2.0, &ctx, 1e-8).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let res = rep.residual_corrected.norm();
    require(
        res <= 1e-8 && elapsed < 1.0,
        format!("|lhs - Im G - F| = {res:.3e}, runtime {elapsed:.3} s"),
    )
}

fn uncorrected_gap_is_f() -> Check {
    let ctx = lossy(Complex64::new(2.0, 0.5), 1.0, 1.0);
    let rep = identity_report(2.0, 2.0, &ctx, 1e-8).map_err(|e| e.to_string())?;
    let gap = (rep.residual_uncorrected - rep.f).norm();
    let f = rep.f.norm();
    require(
        gap <= 1e-8 && f >= 0.1,
        format!("|(lhs - Im G) - F| = {gap:.3e}, |F| = {f:.6}"),
    )
}

fn weak_loss_limit() -> Check {
    let params = EmissionParams::natural(1.0).map_err(|e| e.to_string())?;
    let ctx = params
        .context(SlabGeometry::new(1.0).unwrap(), Complex64::new(1.0, 1e-8))
        .map_err(|e| e.to_string())?;
    let f = boundary_term_f(2.0, 2.0, &ctx).map_err(|e| e.to_string())?;
    let f_err = (f + 0.5 / ctx.k()).norm();
    let ratio =
        decay_rate_corrected(&params, &ctx).map_err(|e| e.to_string())? / params.gamma_vac_1d();
    require(
        f_err <= 1e-6 && ratio.abs() <= 1e-7,
        format!("|F + 1/2k| = {f_err:.3e}, Gamma/gamma_vac = {ratio:.3e}"),
    )
}

fn lossless_unitarity() -> Check {
    let mut worst_unit = 0.0f64;
    let mut worst_rate = 0.0f64;
    for i in 0..5 {
        let n = 1.1 + (4.0 - 1.1) * i as f64 / 4.0;
        for j in 0..5 {
            let kl = 0.1 * 100f64.powf(j as f64 / 4.0);
            let params = EmissionParams::natural(kl).map_err(|e| e.to_string())?;
            let ctx = params
                .context(SlabGeometry::new(1.0).unwrap(), Complex64::new(n * n, 0.0))
                .map_err(|e| e.to_string())?;
            let co = ctx.coefficients();
            worst_unit = worst_unit.max((co.a.norm_sqr() + co.d.norm_sqr() - 1.0).abs());
            let gamma = decay_rate_corrected(&params, &ctx).map_err(|e| e.to_string())?;
            worst_rate = worst_rate.max(gamma.abs() / params.gamma_vac_1d());
        }
    }
    require(
        worst_unit <= 1e-12 && worst_rate <= 1e-12,
        format!("25 configs: max ||A|^2+|D|^2-1| = {worst_unit:.3e}, max |Gamma|/gamma_vac = {worst_rate:.3e}"),
    )
}

fn position_independence() -> Check {
    let params = EmissionParams::natural(1.0).map_err(|e| e.to_string())?;
    let l = 1.0;
    let ctx = params
        .context(
            SlabGeometry::new(l).unwrap(),
            Complex64::new(2.0, 0.5).powi(2),
        )
        .map_err(|e| e.to_string())?;
    let k = ctx.k();
    let span = 4.0 * PI / k;
    // x_S = ℓ itself is excluded: the source must lie strictly outside the slab
    let xs: Vec<f64> = (1..=100).map(|j| l + span * j as f64 / 100.0).collect();
    let mut corrected = Vec::with_capacity(xs.len());
    let mut uncorrected = Vec::with_capacity(xs.len());
    let mut worst_oracle = 0.0f64;
    for &x in &xs {
        // the corrected rate takes no position argument; evaluate it per point anyway
        let g = decay_rate_corrected(&params, &ctx).map_err(|e| e.to_string())?;
        let q = decay_from_quadrature(&params, &ctx, x, 1e-10).map_err(|e| e.to_string())?;
        worst_oracle = worst_oracle.max((q - g).abs() / g.abs());
        corrected.push(g);
        uncorrected.push(decay_rate_uncorrected(&params, &ctx, x).map_err(|e| e.to_string())?);
    }
    let spread = corrected.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - corrected.iter().cloned().fold(f64::INFINITY, f64::min);
    let period =
        oscillation_period(&xs, &uncorrected).ok_or("no oscillation detected in Gamma_G")?;
    let period_err = (period - PI / k).abs() / (PI / k);
    require(
        spread == 0.0 && worst_oracle <= 1e-7 && period_err <= 1e-3,
        format!(
            "Gamma spread = {spread:.1e}, max quadrature rel diff = {worst_oracle:.3e}, Gamma_G period rel err = {period_err:.3e}"
        ),
    )
}

fn boundary_term_l_independent() -> Check {
    let ctx = lossy(Complex64::new(2.0, 0.5), 1.0, 1.0);
    let mut worst = 0.0f64;
    for (xa, xb) in [(2.0, 2.0), (1.5, 3.2), (4.0, 1.1)] {
        let near = boundary_term_b(xb, xa, &ctx, 5.0).map_err(|e| e.to_string())?;
        let far = boundary_term_b(xb, xa, &ctx, 50.0).map_err(|e| e.to_string())?;
        worst = worst.max((near - far).norm() / far.norm());
    }
    require(
        worst <= 1e-10,
        format!("max |b(L=5) - b(L=50)|/|b| = {worst:.3e}"),
    )
}

fn continuity_and_jump() -> Check {
    let mut worst_mismatch = 0.0f64;
    for n in [
        Complex64::new(2.0, 0.5),
        Complex64::new(0.1, 3.0),
        Complex64::new(1.5, 0.0),
    ] {
        let ctx = lossy(n, 1.0, 1.0);
        let x_s = 2.0;
        let max_g = (0..=400)
            .map(|i| -6.0 + 12.0 * i as f64 / 400.0)
            .map(|x| ctx.green(x, x_s).unwrap().value.norm())
            .fold(0.0f64, f64::max);
        let m = ctx.interface_mismatch(x_s).map_err(|e| e.to_string())?;
        worst_mismatch = worst_mismatch.max(m / max_g);
    }
    let ctx = lossy(Complex64::new(2.0, 0.5), 1.0, 1.0);
    let x_s = 2.0;
    let g = |x: f64| ctx.green(x, x_s).unwrap().value;
    // one-sided fourth-order first derivatives on each side of the source
    let jump = |h: f64| {
        let right = (-25.0 * g(x_s) + 48.0 * g(x_s + h) - 36.0 * g(x_s + 2.0 * h)
            + 16.0 * g(x_s + 3.0 * h)
            - 3.0 * g(x_s + 4.0 * h))
            / (12.0 * h);
        let left = (25.0 * g(x_s) - 48.0 * g(x_s - h) + 36.0 * g(x_s - 2.0 * h)
            - 16.0 * g(x_s - 3.0 * h)
            + 3.0 * g(x_s - 4.0 * h))
            / (12.0 * h);
        right - left
    };
    let e1 = (jump(0.04) + 1.0).norm();
    let e2 = (jump(0.02) + 1.0).norm();
    let order = (e1 / e2).log2();
    require(
        worst_mismatch <= 1e-12 && e2 <= 1e-6 && order >= 2.0,
        format!("interface mismatch / max|G| = {worst_mismatch:.3e}, jump error = {e2:.3e}, order = {order:.2}"),
    )
}

fn vacuum_3d() -> Check {
    let params = EmissionParams::natural(1.0).map_err(|e| e.to_string())?;
    let closed = vacuum_decay_3d(&params);
    let target = 1.0 / (3.0 * PI);
    let mut worst_route = (closed - target).abs() / target;
    for dir in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [1.0, -2.0, 0.5]] {
        let c = vacuum_decay_3d_contraction(&params, dir).map_err(|e| e.to_string())?;
        worst_route = worst_route.max((c - target).abs() / target);
    }
    let k = params.wavenumber();
    let exact = im_green_coincident(k).map_err(|e| e.to_string())?;
    let scale = k / (6.0 * PI);
    let mut worst_limit = 0.0f64;
    for sep in [[1e-3, 0.0, 0.0], [0.0, 6e-4, 8e-4], [5e-4, -5e-4, 5e-4]] {
        let t = green_tensor_vacuum(
            k,
            [0.3, -0.2, 0.1],
            [0.3 + sep[0], -0.2 + sep[1], 0.1 + sep[2]],
        )
        .map_err(|e| e.to_string())?
        .imaginary();
        for i in 0..3 {
            for j in 0..3 {
                worst_limit = worst_limit.max((t[i][j] - exact[i][j]).abs() / scale);
            }
        }
    }
    require(
        worst_route <= 1e-12 && worst_limit <= 1e-4,
        format!("Gamma_0 rel err vs 1/(3 pi) = {worst_route:.3e}, coincident Im G rel err = {worst_limit:.3e}"),
    )
}

fn linear_in_loss() -> Check {
    let params = EmissionParams::natural(1.0).map_err(|e| e.to_string())?;
    let geometry = SlabGeometry::new(1.0).unwrap();
    let mut ratios = Vec::new();
    for m in 1..=8 {
        let delta = 10f64.powi(-m);
        let ctx = params
            .context(geometry, Complex64::new(1.0, delta))
            .map_err(|e| e.to_string())?;
        ratios.push(decay_rate_corrected(&params, &ctx).map_err(|e| e.to_string())? / delta);
    }
    let (a, b) = (ratios[6], ratios[7]);
    let rel = (a - b).abs() / b.abs();
    require(
        rel <= 0.01 && b.is_finite() && b > 0.0,
        format!("Gamma/delta at delta=1e-7: {a:.9}, 1e-8: {b:.9}, rel diff = {rel:.3e}"),
    )
}

fn cli_is_deterministic() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let configs = [
        (
            "scan.json",
            r#"{"slab":{"half_length":1.0},"dielectric":{"type":"constant","epsilon":[3.75,2.0]},
                "omega":1.0,"source":{"start":1.05,"stop":13.5,"count":40}}"#,
        ),
        (
            "drude.json",
            r#"{"slab":{"half_length":0.5},"dielectric":{"type":"drude","plasma_frequency":3.0,"damping":0.1},
                "omega":{"start":0.2,"stop":6.0,"count":12,"spacing":"log"},"source":2.0}"#,
        ),
        (
            "limit.json",
            r#"{"slab":{"half_length":1.0},"omega":1.0,"source":2.0}"#,
        ),
        (
            "thickness.json",
            r#"{"slab":{"half_length":{"start":1e-4,"stop":2.0,"count":15,"spacing":"log"}},
                "dielectric":{"type":"constant","epsilon":[3.75,2.0]},"omega":1.0,"source":2.5}"#,
        ),
        (
            "tensor.json",
            r#"{"omega":1.0,"tensor3d":{"separations":[[0,0,1],[1e-3,0,0],[1,2,-0.5]]}}"#,
        ),
    ];
    for (name, text) in configs {
        std::fs::write(dir.path().join(name), text).map_err(|e| e.to_string())?;
    }
    let runs: [(&[&str], &str); 7] = [
        (&["coefficients"], "drude.json"),
        (&["verify-identity"], "drude.json"),
        (
            &["decay-scan", "--sweep", "position", "--oracle"],
            "scan.json",
        ),
        (&["decay-scan", "--sweep", "frequency"], "drude.json"),
        (&["decay-scan", "--sweep", "thickness"], "thickness.json"),
        (&["limit-study"], "limit.json"),
        (&["tensor3d"], "tensor.json"),
    ];
    let mut compared = 0;
    for (args, config) in runs {
        let first = run_cli(dir.path(), args, config, "first.csv")?;
        let second = run_cli(dir.path(), args, config, "second.csv")?;
        if first != second {
            return Err(format!("{} output differs between runs", args.join(" ")));
        }
        compared += 1;
    }
    Ok(format!(
        "{compared} subcommand runs byte-identical across repeats"
    ))
}

fn run_cli(dir: &Path, args: &[&str], config: &str, out: &str) -> Result<Vec<u8>, String> {
    let out_path = dir.join(out);
    let status = Command::new(env!("CARGO_BIN_EXE_slabgreen"))
        .args(args)
        .arg("--config")
        .arg(dir.join(config))
        .arg("--out")
        .arg(&out_path)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!(
            "{} on {config} exited with {status}",
            args.join(" ")
        ));
    }
    std::fs::read(&out_path).map_err(|e| e.to_string())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "corrected identity, n=2+0.5i, x_A=x_B=2",
            corrected_identity,
        ),
        ("uncorrected gap equals F", uncorrected_gap_is_f),
        ("weak-loss limit of F and Gamma", weak_loss_limit),
        ("lossless unitarity and zero Gamma", lossless_unitarity),
        (
            "Gamma independent of x_S; Gamma_G period pi/k",
            position_independence,
        ),
        (
            "boundary term independent of L",
            boundary_term_l_independent,
        ),
        (
            "continuity at interfaces and unit derivative jump",
            continuity_and_jump,
        ),
        ("3D vacuum rate and coincident tensor", vacuum_3d),
        ("Gamma linear in small loss", linear_in_loss),
        ("CLI output deterministic", cli_is_deterministic),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
