//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs as a plain binary (`harness = false`) so the lines
//! always print under `cargo test`.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use qfourier::hardy::{classify, classify_claimed, extremal_function, Classification, DecayBound};
use qfourier::qbessel::{
    estimate_sigma_p, growth_ratio_at, probe_points, BesselSeriesSpec, SeriesConvention,
    DEFAULT_TERM_TOLERANCE,
};
use qfourier::qnum::{
    jackson_integral, qpochhammer, qpochhammer_infinite, GridFunction, PochhammerOrder, QGrid,
    QParams,
};
use qfourier::qtransform::{dilation_residual, growth_ratio, inversion_residual, TransformContext};
use qfourier::suites::{
    growth_constant_probe_grids, growth_probes, inversion_family, refined_growth_probes,
    GROWTH_CONSTANT_RAYS,
};
use qfourier::Complex64;

const Q: f64 = 0.5;
const N_MIN: i32 = -8;
const N_MAX: i32 = 40;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn ctx(nu: f64, convention: SeriesConvention) -> TransformContext {
    let params = QParams::new(Q, nu).unwrap();
    let spec = BesselSeriesSpec::new(params, convention, DEFAULT_TERM_TOLERANCE).unwrap();
    TransformContext::new(spec, QGrid::new(Q, N_MIN, N_MAX).unwrap()).unwrap()
}

fn worst_inversion(nu: f64, convention: SeriesConvention) -> (f64, String) {
    let c = ctx(nu, convention);
    let mut worst = (0.0, String::new());
    for (label, f) in inversion_family(c.grid()).unwrap() {
        let r = inversion_residual(&c, &f).unwrap();
        if r >= worst.0 || r.is_nan() {
            worst = (r, label);
        }
    }
    worst
}

fn inversion() -> Outcome {
    let start = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for nu in [0.0, 0.5, 1.0] {
        let (r, label) = worst_inversion(nu, SeriesConvention::SelfDual);
        passed &= r < 1e-8;
        parts.push(format!("nu={nu}: {r:.2e} ({label})"));
    }
    let secs = start.elapsed().as_secs_f64();
    passed &= secs < 5.0;
    Outcome {
        name: "double transform returns the input (sup residual < 1e-8, < 5 s)",
        passed,
        detail: format!("{}; {secs:.2} s", parts.join(", ")),
    }
}

fn convention_selection() -> Outcome {
    let mut parts = Vec::new();
    let mut self_dual_ok = true;
    for nu in [0.0, 0.5, 1.0] {
        let (a, _) = worst_inversion(nu, SeriesConvention::SelfDual);
        let (b, _) = worst_inversion(nu, SeriesConvention::LinearPower);
        self_dual_ok &= a < 1e-8;
        parts.push(format!("nu={nu}: self-dual {a:.2e} / linear {b:.2e}"));
    }
    let default_ok = SeriesConvention::default() == SeriesConvention::SelfDual;
    Outcome {
        name: "default convention is the one under which inversion passes",
        passed: self_dual_ok && default_ok,
        detail: parts.join(", "),
    }
}

fn kernel_growth_constants() -> Outcome {
    let (base, fine) = growth_constant_probe_grids(Q).unwrap();
    let mut passed = base.len() >= 15 && GROWTH_CONSTANT_RAYS >= 8;
    passed &= (base.point(base.n_max()) - Q.powi(8)).abs() < 1e-15;
    passed &= (base.point(base.n_min()) - Q.powi(-6)).abs() < 1e-12;
    let mut parts = Vec::new();
    for nu in [0.0, 0.5, 1.0] {
        let spec = BesselSeriesSpec::standard(QParams::new(Q, nu).unwrap());
        for p in 0..=2 {
            let a = estimate_sigma_p(&spec, p, &base, GROWTH_CONSTANT_RAYS).unwrap();
            let b = estimate_sigma_p(&spec, p, &fine, 2 * GROWTH_CONSTANT_RAYS).unwrap();
            let holds = probe_points(&base, GROWTH_CONSTANT_RAYS)
                .into_iter()
                .all(|z| growth_ratio_at(&spec, p, z).unwrap() <= a.sigma_p);
            let change = (b.sigma_p - a.sigma_p).abs() / a.sigma_p;
            passed &= a.sigma_p.is_finite() && holds && change < 0.05;
            parts.push(format!(
                "nu={nu} p={p}: {:.4} ({:.1}%)",
                a.sigma_p,
                100.0 * change
            ));
        }
    }
    Outcome {
        name: "sampled |z|^{2p}|j| <= sigma_p e^{|z|} is finite, holds, and moves < 5% when probes double",
        passed,
        detail: format!("{} probes; {}", base.len() * GROWTH_CONSTANT_RAYS + 1, parts.join(", ")),
    }
}

fn transform_growth() -> Outcome {
    let c = ctx(0.0, SeriesConvention::SelfDual);
    let f = GridFunction::gaussian(*c.grid(), 1.0, 0.5).unwrap();
    let a = growth_ratio(&c, &f, &growth_probes(Q)).unwrap();
    let b = growth_ratio(&c, &f, &refined_growth_probes(Q)).unwrap();
    let change = (b - a).abs() / a;
    Outcome {
        name: "growth of the transform of e^{-x^2/2} off the axis is finite and stable within 10%",
        passed: a.is_finite() && b.is_finite() && change < 0.10,
        detail: format!("{a:.6} -> {b:.6} ({:.1}%)", 100.0 * change),
    }
}

fn dilation() -> Outcome {
    let c = ctx(0.0, SeriesConvention::SelfDual);
    let f = GridFunction::gaussian(*c.grid(), 1.0, 0.5).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for k in [1, 2, -1] {
        let r = dilation_residual(&c, &f, k).unwrap();
        passed &= r < 1e-9;
        parts.push(format!("a=q^{k}: {r:.2e}"));
    }
    Outcome {
        name: "transform of a dilation is the rescaled transform (interior residual < 1e-9)",
        passed,
        detail: parts.join(", "),
    }
}

fn hardy_classification() -> Outcome {
    let c = ctx(0.0, SeriesConvention::SelfDual);
    let grid = *c.grid();
    let tol = qfourier::hardy::DEFAULT_CLASSIFICATION_TOLERANCE;
    let mut parts = Vec::new();

    let ext = classify(&extremal_function(&c, 0.5).unwrap(), &c, tol).unwrap();
    let a_rel = (ext.fitted_a.re - 1.0 / c.c()).abs() * c.c();
    let extremal_ok = ext.classification == Classification::ExtremalFamily
        && ext.fit_residual < 1e-6
        && a_rel < 1e-4;
    parts.push(format!(
        "extremal(1/2): {} (p*sigma {:.3e}, fit residual {:.3e}, |A c - 1| {:.3e})",
        ext.classification.name(),
        ext.product,
        ext.fit_residual,
        a_rel
    ));

    let slow = classify(&GridFunction::gaussian(grid, 1.0, 0.125).unwrap(), &c, tol).unwrap();
    let slow_ok = slow.classification == Classification::Unconstrained;
    parts.push(format!("e^(-x^2/8): {}", slow.classification.name()));

    let zero = GridFunction::zeros(grid);
    let mut zero_ok =
        classify(&zero, &c, tol).unwrap().classification == Classification::MustVanish;
    for (p, s) in [(0.5, 1.0), (2.0, 0.5), (0.125, 4.0), (0.5, 0.75)] {
        let r = classify_claimed(
            &zero,
            &c,
            DecayBound::new(1.0, p).unwrap(),
            DecayBound::new(1.0, s).unwrap(),
            tol,
        )
        .unwrap();
        zero_ok &= r.classification == Classification::MustVanish;
    }
    parts.push(format!(
        "zero: {}",
        if zero_ok {
            "must-vanish"
        } else {
            "not must-vanish"
        }
    ));

    let ranks: Vec<u8> = [0.125, 0.5, 2.0]
        .into_iter()
        .map(|s| {
            let f = GridFunction::gaussian(grid, 1.0, s).unwrap();
            classify(&f, &c, tol).unwrap().classification.rank()
        })
        .collect();
    let monotone = ranks.windows(2).all(|w| w[0] <= w[1]);
    parts.push(format!("ranks over sigma 1/8, 1/2, 2: {ranks:?}"));

    Outcome {
        name: "extremal input fits the extremal family; slow Gaussian unconstrained; zero vanishes; monotone",
        passed: extremal_ok && slow_ok && zero_ok && monotone,
        detail: parts.join("; "),
    }
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_qfourier"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let input: PathBuf = dir.path().join("gauss.csv");
    let rows: String = (N_MIN..=N_MAX)
        .map(|n| format!("{n},{:.16e}\n", (-0.5 * Q.powi(2 * n)).exp()))
        .collect();
    std::fs::write(&input, rows).unwrap();
    let input = input.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["eval-j", "0", "1.5", "-3", "3i", "40", "--", "-2+0.5i"],
        vec!["transform", "--input", input],
        vec!["transform", "--input", input, "--x", "0.3", "1.7", "5"],
        vec!["verify", "inversion"],
        vec!["verify", "dilation"],
        vec!["verify", "growth-constants"],
        vec!["verify", "hardy"],
        vec!["extremal", "--sigma", "0.5"],
        vec!["extremal", "--format", "json"],
    ];
    let mut passed = true;
    let mut differing = Vec::new();
    for args in &commands {
        let first = cli(args);
        let second = cli(args);
        if first != second || first.1.is_empty() {
            passed = false;
            differing.push(args.join(" "));
        }
    }
    Outcome {
        name: "every CLI command is byte-identical across two runs",
        passed,
        detail: if differing.is_empty() {
            format!("{} commands", commands.len())
        } else {
            format!("differing: {}", differing.join(" | "))
        },
    }
}

fn qnum_oracles() -> Outcome {
    let mut recurrence = true;
    for a in [0.3, -0.7, 2.5] {
        for q in [0.1, 0.5, 0.9] {
            for n in 0..30 {
                let lhs = qpochhammer(a, q, PochhammerOrder::Finite(n + 1)).unwrap();
                let rhs = qpochhammer(a, q, PochhammerOrder::Finite(n)).unwrap()
                    * (1.0 - a * q.powi(n as i32));
                recurrence &= lhs == rhs;
            }
        }
    }
    let grid = QGrid::new(Q, -10, 80).unwrap();
    let f =
        GridFunction::from_fn(grid, |x| Complex64::from(if x <= 1.0 { x } else { 0.0 })).unwrap();
    let jackson_err = (jackson_integral(&f).re - 1.0 / (1.0 + Q)).abs();
    let direct: f64 = (0..60).map(|i| 1.0 - Q * Q.powi(i)).product();
    let (inf, _) = qpochhammer_infinite(Q, Q).unwrap();
    let poch_err = (inf.re - direct).abs();
    Outcome {
        name: "q-Pochhammer recurrence exact to n = 30, Jackson oracle 1e-15, (q;q)_inf 1e-14",
        passed: recurrence && jackson_err < 1e-15 && poch_err < 1e-14,
        detail: format!(
            "recurrence exact: {recurrence}, Jackson error {jackson_err:.1e}, product error {poch_err:.1e}"
        ),
    }
}

fn main() {
    let criteria: [fn() -> Outcome; 8] = [
        inversion,
        convention_selection,
        kernel_growth_constants,
        transform_growth,
        dilation,
        hardy_classification,
        determinism,
        qnum_oracles,
    ];
    let mut failed = 0;
    for criterion in criteria {
        let o = criterion();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {}", o.name, o.detail);
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
