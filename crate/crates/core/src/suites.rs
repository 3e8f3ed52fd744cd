//! Named verification suites run by `qfourier verify`.
//!
//! Each suite returns one [`Check`] per property with the measured value and
//! the threshold it is held to.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hardy::{
    classify, classify_claimed, decay_check, extremal_function, measure_decay, Classification,
    DecayBound, DEFAULT_CLASSIFICATION_TOLERANCE,
};
use crate::qbessel::{estimate_sigma_p, probe_points, BesselSeriesSpec};
use crate::qnum::{GridFunction, QGrid};
use crate::qtransform::{
    dilation_residual, forward_grid, growth_ratio, inversion_residual, ray_probes, TransformContext,
};

pub const INVERSION_TOLERANCE: f64 = 1e-8;
pub const DILATION_TOLERANCE: f64 = 1e-9;
pub const SIGMA_REFINEMENT_TOLERANCE: f64 = 0.05;
pub const GROWTH_REFINEMENT_TOLERANCE: f64 = 0.10;

/// Gaussian rates in the inversion family.
pub const INVERSION_GAUSSIANS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
/// Lattice indices of the point masses in the inversion family.
pub const INVERSION_POINT_MASSES: [i32; 3] = [-2, 0, 3];
/// Seed and support of the random samples in the inversion family.
pub const RANDOM_SEED: u64 = 0x5eed_0001;
pub const RANDOM_SAMPLES: usize = 5;
pub const RANDOM_SUPPORT: (i32, i32) = (-4, 2);
/// Dilation exponents `k` (with `a = q^k`) checked by the dilation suite.
pub const DILATIONS: [i32; 3] = [1, 2, -1];

/// One verified property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// `value < threshold`.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value < threshold,
        }
    }

    /// A yes/no property; `value` is 1 when it holds.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            threshold: 1.0,
            passed: ok,
        }
    }
}

/// Random window-supported samples with a fixed seed, values in `[-1, 1]`.
pub fn random_samples(grid: &QGrid, count: usize, seed: u64) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = RANDOM_SUPPORT;
    (0..count)
        .map(|_| {
            let values = grid
                .indices()
                .map(|n| {
                    if (lo..=hi).contains(&n) {
                        Complex64::new(rng.gen_range(-1.0..=1.0), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            GridFunction::new(*grid, values).expect("finite samples")
        })
        .collect()
}

/// The inversion test family: labelled Gaussians, point masses inside the
/// window, and seeded random samples.
pub fn inversion_family(grid: &QGrid) -> Result<Vec<(String, GridFunction)>> {
    let mut family = Vec::new();
    for s in INVERSION_GAUSSIANS {
        family.push((
            format!("gaussian rate {s}"),
            GridFunction::gaussian(*grid, 1.0, s)?,
        ));
    }
    for n in INVERSION_POINT_MASSES
        .into_iter()
        .filter(|n| grid.contains(*n))
    {
        family.push((
            format!("point mass at n={n}"),
            GridFunction::indicator(*grid, n)?,
        ));
    }
    for (i, f) in random_samples(grid, RANDOM_SAMPLES, RANDOM_SEED)
        .into_iter()
        .enumerate()
    {
        family.push((format!("random sample {i}"), f));
    }
    Ok(family)
}

pub fn inversion(ctx: &TransformContext) -> Result<Vec<Check>> {
    inversion_family(ctx.grid())?
        .into_iter()
        .map(|(name, f)| {
            let r = inversion_residual(ctx, &f)?;
            Ok(Check::below(
                format!("inversion {name}"),
                r,
                INVERSION_TOLERANCE,
            ))
        })
        .collect()
}

pub fn dilation(ctx: &TransformContext) -> Result<Vec<Check>> {
    let f = GridFunction::gaussian(*ctx.grid(), 1.0, 0.5)?;
    DILATIONS
        .into_iter()
        .map(|k| {
            let r = dilation_residual(ctx, &f, k)?;
            Ok(Check::below(
                format!("dilation a=q^{k}"),
                r,
                DILATION_TOLERANCE,
            ))
        })
        .collect()
}

/// Probe magnitudes `q^{k/4}` for `-24 <= k <= 32`, i.e. 57 magnitudes in
/// `[q^8, q^-6]`, and the refined set with steps `q^{1/8}` over the same
/// range. Coarser steps miss the peak of `|z|^4 |j| e^{-|z|}` on the imaginary
/// axis by about 10%.
pub fn growth_constant_probe_grids(q: f64) -> Result<(QGrid, QGrid)> {
    Ok((
        QGrid::new(q.powf(0.25), -24, 32)?,
        QGrid::new(q.powf(0.125), -48, 64)?,
    ))
}

pub const GROWTH_CONSTANT_RAYS: usize = 8;

pub fn growth_constants(spec: &BesselSeriesSpec) -> Result<Vec<Check>> {
    let (base, fine) = growth_constant_probe_grids(spec.params().q())?;
    let mut checks = Vec::new();
    for p in 0..=2u32 {
        let coarse = estimate_sigma_p(spec, p, &base, GROWTH_CONSTANT_RAYS)?;
        let refined = estimate_sigma_p(spec, p, &fine, 2 * GROWTH_CONSTANT_RAYS)?;
        checks.push(Check::holds(
            format!("sigma_{p} finite"),
            coarse.sigma_p.is_finite(),
        ));
        let mut worst = 0.0f64;
        for z in probe_points(&base, GROWTH_CONSTANT_RAYS) {
            let r = crate::qbessel::growth_ratio_at(spec, p, z)?;
            worst = worst.max(r / coarse.sigma_p);
        }
        checks.push(Check {
            name: format!("sigma_{p} bound on probes (max ratio / sigma)"),
            value: worst,
            threshold: 1.0,
            passed: worst <= 1.0,
        });
        let change = (refined.sigma_p - coarse.sigma_p).abs() / coarse.sigma_p;
        checks.push(Check::below(
            format!("sigma_{p} refinement change"),
            change,
            SIGMA_REFINEMENT_TOLERANCE,
        ));
    }
    Ok(checks)
}

/// Standard growth probes: 8 rays times `q^3 .. q^-4`, plus the origin.
pub fn growth_probes(q: f64) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(0.0, 0.0)];
    p.extend(ray_probes(q, 8, -4, 3));
    p
}

/// Refined growth probes: 16 rays times magnitudes spaced by `q^{1/2}` over
/// the same range, plus the origin.
pub fn refined_growth_probes(q: f64) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(0.0, 0.0)];
    p.extend(ray_probes(q.sqrt(), 16, -8, 6));
    p
}

pub fn hardy(ctx: &TransformContext) -> Result<Vec<Check>> {
    let tol = DEFAULT_CLASSIFICATION_TOLERANCE;
    let grid = *ctx.grid();
    let q = grid.q();
    let mut checks = Vec::new();

    let gauss = GridFunction::gaussian(grid, 1.0, 0.5)?;
    let g1 = growth_ratio(ctx, &gauss, &growth_probes(q))?;
    let g2 = growth_ratio(ctx, &gauss, &refined_growth_probes(q))?;
    checks.push(Check::holds(
        "growth ratio finite",
        g1.is_finite() && g2.is_finite(),
    ));
    checks.push(Check::below(
        "growth ratio refinement change",
        (g2 - g1).abs() / g1,
        GROWTH_REFINEMENT_TOLERANCE,
    ));

    let extremal = extremal_function(ctx, 0.5)?;
    let back = forward_grid(ctx, &extremal.scale(Complex64::from(1.0 / ctx.c())))?.output;
    checks.push(Check::below(
        "extremal closure",
        back.sup_distance(&gauss)?,
        INVERSION_TOLERANCE,
    ));

    for (label, f) in [
        ("gaussian 1/2", gauss.clone()),
        ("extremal 1/2", extremal.clone()),
        (
            "gaussian 3e^{-2x^2}",
            GridFunction::gaussian(grid, 3.0, 2.0)?,
        ),
    ] {
        let b = measure_decay(&f);
        checks.push(Check::holds(
            format!("decay envelope sound for {label}"),
            decay_check(&f, &b).holds,
        ));
    }

    let report = classify(&extremal, ctx, tol)?;
    checks.push(Check::holds(
        format!(
            "extremal 1/2 classifies extremal-family (got {}, p*sigma = {:.6e})",
            report.classification.name(),
            report.product
        ),
        report.classification == Classification::ExtremalFamily,
    ));
    checks.push(Check::below(
        "extremal 1/2 fit residual",
        report.fit_residual,
        1e-6,
    ));
    checks.push(Check::below(
        "extremal 1/2 fitted A relative to 1/c",
        (report.fitted_a.re - 1.0 / ctx.c()).abs() * ctx.c(),
        1e-4,
    ));

    let slow = GridFunction::gaussian(grid, 1.0, 0.125)?;
    let report = classify(&slow, ctx, tol)?;
    checks.push(Check::holds(
        "e^{-x^2/8} classifies unconstrained",
        report.classification == Classification::Unconstrained,
    ));

    let zero = GridFunction::zeros(grid);
    let mut zero_ok = classify(&zero, ctx, tol)?.classification == Classification::MustVanish;
    for (p, s) in [(0.5, 1.0), (2.0, 0.5), (0.125, 4.0)] {
        let r = classify_claimed(
            &zero,
            ctx,
            DecayBound::new(1.0, p)?,
            DecayBound::new(1.0, s)?,
            tol,
        )?;
        zero_ok &= r.classification == Classification::MustVanish;
    }
    checks.push(Check::holds("zero function must vanish", zero_ok));

    let mut ranks = Vec::new();
    for s in [0.125, 0.5, 2.0] {
        let f = GridFunction::gaussian(grid, 1.0, s)?;
        ranks.push(classify(&f, ctx, tol)?.classification.rank());
    }
    checks.push(Check::holds(
        "family transitions are monotone",
        ranks.windows(2).all(|w| w[0] <= w[1]),
    ));
    Ok(checks)
}
