//! The q-Bessel Fourier transform
//! `F f(x) = c_{q,nu} int_0^inf f(t) j_nu(x t, q^2) t^{2 nu + 1} d_q t`
//! on a finite lattice window, with its complex extension, growth and
//! inversion diagnostics, and lattice dilations.
//!
//! The integration window is the sampling grid of `f`. For a lattice point
//! `x = q^m` every kernel argument is again a lattice point `q^{m+n}`, and
//! those kernel values are precomputed once per [`TransformContext`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qbessel::{
    eval_j, eval_j_lattice, BesselSeriesSpec, BesselValue, SeriesConvention, ILL_CONDITIONED,
};
use crate::qnum::{
    jackson_integral_with, lattice_exponent, qpochhammer_infinite, GridFunction, QGrid, QParams,
};

/// Largest `|z|` accepted by [`growth_ratio`]; `e^{|z|^2/2}` overflows near 37.6.
pub const MAX_GROWTH_PROBE: f64 = 35.0;

/// `c_{q,nu} = (q^{2nu+2}; q^2)_inf / ((1 - q) (q^2; q^2)_inf)`.
pub fn normalization_constant(params: &QParams) -> Result<f64> {
    let q = params.q();
    let base = q.powf(2.0);
    let (num, _) = qpochhammer_infinite(q.powf(2.0 * params.nu() + 2.0), base)?;
    let (den, _) = qpochhammer_infinite(base, base)?;
    Ok(num.re / den.re / (1.0 - q))
}

/// Immutable state shared by every transform evaluation: parameters, kernel
/// convention, integration window, `c_{q,nu}`, and the kernel values
/// `j_nu(q^s, q^2)` for `2 n_min <= s <= 2 n_max`.
#[derive(Debug, Clone)]
pub struct TransformContext {
    spec: BesselSeriesSpec,
    grid: QGrid,
    c: f64,
    kernel: Vec<BesselValue>,
    weights: Vec<f64>,
}

impl TransformContext {
    pub fn new(spec: BesselSeriesSpec, grid: QGrid) -> Result<Self> {
        let params = *spec.params();
        if grid.q() != params.q() {
            return Err(Error::BaseMismatch {
                grid: grid.q(),
                params: params.q(),
            });
        }
        let c = normalization_constant(&params)?;
        let kernel = (2 * grid.n_min()..=2 * grid.n_max())
            .map(|s| eval_j_lattice(&spec, s))
            .collect::<Result<Vec<_>>>()?;
        let w = params.weight_exponent();
        let weights = grid.indices().map(|n| grid.point(n).powf(w)).collect();
        Ok(Self {
            spec,
            grid,
            c,
            kernel,
            weights,
        })
    }

    /// Self-dual kernel, default tolerance.
    pub fn standard(q: f64, nu: f64, n_min: i32, n_max: i32) -> Result<Self> {
        let params = QParams::new(q, nu)?;
        Self::new(
            BesselSeriesSpec::standard(params),
            QGrid::new(q, n_min, n_max)?,
        )
    }

    pub fn params(&self) -> &QParams {
        self.spec.params()
    }

    pub fn spec(&self) -> &BesselSeriesSpec {
        &self.spec
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    /// The normalization constant `c_{q,nu}`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `j_nu(q^s, q^2)`, from the precomputed table when `s` is covered.
    pub fn lattice_kernel(&self, s: i32) -> Result<BesselValue> {
        let first = 2 * self.grid.n_min();
        match usize::try_from(s - first)
            .ok()
            .and_then(|i| self.kernel.get(i))
        {
            Some(v) => Ok(*v),
            None => eval_j_lattice(&self.spec, s),
        }
    }

    fn check_input(&self, f: &GridFunction) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::InvalidArgument(format!(
                "function sampled on [{}, {}] (q = {}) but the transform window is [{}, {}] (q = {})",
                f.grid().n_min(),
                f.grid().n_max(),
                f.grid().q(),
                self.grid.n_min(),
                self.grid.n_max(),
                self.grid.q()
            )));
        }
        Ok(())
    }
}

/// A transform value and the worst kernel condition estimate that fed it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub value: Complex64,
    pub max_condition: f64,
}

impl TransformValue {
    pub fn is_ill_conditioned(&self) -> bool {
        self.max_condition > ILL_CONDITIONED
    }
}

/// A transformed grid function with its worst kernel condition estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTransform {
    pub output: GridFunction,
    pub max_condition: f64,
}

impl GridTransform {
    pub fn is_ill_conditioned(&self) -> bool {
        self.max_condition > ILL_CONDITIONED
    }
}

/// `c * (1 - q) sum_n q^n f(q^n) k_n (q^n)^{2nu+1}` with kernel values `k_n`.
fn transform_sum(
    ctx: &TransformContext,
    f: &GridFunction,
    mut kernel: impl FnMut(i32) -> Result<BesselValue>,
) -> Result<TransformValue> {
    let grid = ctx.grid;
    let values = f.values();
    let mut terms = Vec::with_capacity(values.len());
    let mut max_condition = 0.0f64;
    for (i, n) in grid.indices().enumerate() {
        let v = values[i];
        if v.re == 0.0 && v.im == 0.0 {
            terms.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let k = kernel(n)?;
        max_condition = max_condition.max(k.condition);
        terms.push(v * k.value * ctx.weights[i]);
    }
    let n_min = grid.n_min();
    let integral = jackson_integral_with(&grid, |n, _| terms[(n - n_min) as usize]);
    Ok(TransformValue {
        value: integral * ctx.c,
        max_condition,
    })
}

/// `F f(x)` for `x > 0`.
pub fn forward(ctx: &TransformContext, f: &GridFunction, x: f64) -> Result<TransformValue> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "transform point must be positive, got {x}"
        )));
    }
    eval_at_complex(ctx, f, Complex64::new(x, 0.0))
}

/// `F f` at every point of the window.
pub fn forward_grid(ctx: &TransformContext, f: &GridFunction) -> Result<GridTransform> {
    ctx.check_input(f)?;
    let mut out = Vec::with_capacity(f.values().len());
    let mut max_condition = 0.0f64;
    for m in ctx.grid.indices() {
        let v = transform_sum(ctx, f, |n| ctx.lattice_kernel(m + n))?;
        max_condition = max_condition.max(v.max_condition);
        out.push(v.value);
    }
    Ok(GridTransform {
        output: GridFunction::new(ctx.grid, out)?,
        max_condition,
    })
}

/// The entire extension `z -> c int f(t) j_nu(z t, q^2) t^{2nu+1} d_q t`.
///
/// Real lattice points reuse the precomputed kernel table, so the result at
/// `z = q^m` is bit-identical to the corresponding [`forward_grid`] entry.
pub fn eval_at_complex(
    ctx: &TransformContext,
    f: &GridFunction,
    z: Complex64,
) -> Result<TransformValue> {
    ctx.check_input(f)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFiniteArgument(z.to_string()));
    }
    let q = ctx.grid.q();
    let lattice = if z.im != 0.0 {
        None
    } else {
        match ctx.spec.convention() {
            SeriesConvention::SelfDual => lattice_exponent(q, z.re.abs()),
            SeriesConvention::LinearPower => lattice_exponent(q, z.re),
        }
    };
    match lattice {
        Some(m) => transform_sum(ctx, f, |n| ctx.lattice_kernel(m + n)),
        None => transform_sum(ctx, f, |n| eval_j(&ctx.spec, z * ctx.grid.point(n))),
    }
}

/// Largest `|F f(z)| / e^{|z|^2 / 2}` over `probes`.
pub fn growth_ratio(ctx: &TransformContext, f: &GridFunction, probes: &[Complex64]) -> Result<f64> {
    let mut best = 0.0f64;
    for &z in probes {
        let r = z.norm();
        if r > MAX_GROWTH_PROBE {
            return Err(Error::Overflow(r));
        }
        let v = eval_at_complex(ctx, f, z)?.value.norm();
        best = best.max(v / (0.5 * r * r).exp());
    }
    Ok(best)
}

/// `rays` equally spaced directions times the magnitudes `q^k` for
/// `k_high >= k >= k_low` (so `q^{k_high}` is the smallest).
pub fn ray_probes(q: f64, rays: usize, k_low: i32, k_high: i32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rays * (k_high - k_low + 1).max(0) as usize);
    for k in (k_low..=k_high).rev() {
        let r = q.powi(k);
        out.extend((0..rays).map(|j| crate::qbessel::ray(j, rays) * r));
    }
    out
}

/// `sup_n |F(F f)(q^n) - f(q^n)|` over the window.
pub fn inversion_residual(ctx: &TransformContext, f: &GridFunction) -> Result<f64> {
    let once = forward_grid(ctx, f)?;
    let twice = forward_grid(ctx, &once.output)?;
    twice.output.sup_distance(f)
}

/// `f_a(x) = f(a x)` for `a = q^k`: `f_a(q^n) = f(q^{n+k})`, zero where
/// `n + k` leaves the window.
pub fn dilate(f: &GridFunction, k: i32) -> GridFunction {
    let grid = *f.grid();
    let values = grid
        .indices()
        .map(|n| {
            n.checked_add(k)
                .and_then(|s| f.get(s))
                .unwrap_or(Complex64::new(0.0, 0.0))
        })
        .collect();
    GridFunction::new(grid, values).expect("shifted samples keep the grid length and stay finite")
}

/// Largest `|F(f_a)(x) - a^{-(2nu+2)} F f(x/a)|` over window points at least
/// `|k|` indices away from both ends, with `a = q^k`.
///
/// The left side is a grid transform of the shifted samples; the right side
/// evaluates `F f` directly at the lattice point `x / a = q^{m-k}`.
pub fn dilation_residual(ctx: &TransformContext, f: &GridFunction, k: i32) -> Result<f64> {
    let lhs = forward_grid(ctx, &dilate(f, k))?.output;
    let grid = ctx.grid;
    let scale = grid.q().powf(-(k as f64) * (2.0 * ctx.params().nu() + 2.0));
    let margin = k.abs();
    let mut worst = 0.0f64;
    for m in (grid.n_min() + margin)..=(grid.n_max() - margin) {
        let rhs = forward(ctx, f, grid.point(m - k))?.value * scale;
        let left = lhs.get(m).expect("interior index");
        worst = worst.max((left - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> TransformContext {
        TransformContext::standard(0.5, 0.0, -8, 40).unwrap()
    }

    #[test]
    fn normalization_cancels_at_order_zero() {
        let p = QParams::new(0.5, 0.0).unwrap();
        assert_eq!(normalization_constant(&p).unwrap(), 2.0);
        let p = QParams::new(0.9, 0.0).unwrap();
        assert!((normalization_constant(&p).unwrap() - 10.0).abs() < 1e-13);
    }

    #[test]
    fn normalization_at_half_order() {
        // Oracle: 200-factor direct products.
        let (mut num, mut den) = (1.0f64, 1.0f64);
        for i in 0..200 {
            num *= 1.0 - 0.125 * 0.25f64.powi(i);
            den *= 1.0 - 0.25 * 0.25f64.powi(i);
        }
        let expected = num / den / 0.5;
        let p = QParams::new(0.5, 0.5).unwrap();
        let c = normalization_constant(&p).unwrap();
        assert!((c - expected).abs() < 1e-14 * expected);
    }

    #[test]
    fn zero_maps_to_zero() {
        let ctx = ctx();
        let zero = GridFunction::zeros(*ctx.grid());
        let out = forward_grid(&ctx, &zero).unwrap().output;
        assert!(out.is_zero());
        assert_eq!(inversion_residual(&ctx, &zero).unwrap(), 0.0);
        assert_eq!(
            growth_ratio(&ctx, &zero, &ray_probes(0.5, 8, -4, 3)).unwrap(),
            0.0
        );
    }

    #[test]
    fn forward_scales_exactly() {
        let ctx = ctx();
        let f = GridFunction::gaussian(*ctx.grid(), 1.0, 0.5).unwrap();
        let two_f = f.scale(Complex64::new(2.0, 0.0));
        for x in [0.3, 1.0, 4.0] {
            let a = forward(&ctx, &f, x).unwrap().value;
            let b = forward(&ctx, &two_f, x).unwrap().value;
            assert_eq!(b, a * 2.0);
        }
    }

    #[test]
    fn grid_transform_matches_pointwise() {
        let ctx = ctx();
        let f = GridFunction::gaussian(*ctx.grid(), 1.0, 0.5).unwrap();
        let grid = forward_grid(&ctx, &f).unwrap().output;
        for (n, x, v) in grid.iter() {
            assert_eq!(forward(&ctx, &f, x).unwrap().value, v, "n = {n}");
        }
        assert!(grid.values().iter().all(|v| v.im.abs() < 1e-12));
    }

    #[test]
    fn origin_collapses_kernel() {
        let ctx = ctx();
        let f = GridFunction::gaussian(*ctx.grid(), 1.0, 0.5).unwrap();
        let at0 = eval_at_complex(&ctx, &f, Complex64::new(0.0, 0.0))
            .unwrap()
            .value;
        let w = GridFunction::from_fn(*ctx.grid(), |t| Complex64::from((-t * t / 2.0).exp() * t))
            .unwrap();
        let expected = crate::qnum::jackson_integral(&w) * ctx.c();
        assert!((at0 - expected).norm() < 1e-15 * expected.norm());
        assert_eq!(
            growth_ratio(&ctx, &f, &[Complex64::new(0.0, 0.0)]).unwrap(),
            at0.norm()
        );
    }

    #[test]
    fn gaussian_transform_by_direct_double_loop() {
        // Oracle: plain nested loops over the series terms and the lattice,
        // no kernel table, no exchange identity. At x = 1 only t <= 2 matters
        // numerically, where the direct series is well conditioned.
        let ctx = ctx();
        let f = GridFunction::gaussian(*ctx.grid(), 1.0, 0.5).unwrap();
        let q: f64 = 0.5;
        let mut total = 0.0f64;
        for n in -8..=40 {
            let t: f64 = q.powi(n);
            let mut j = 0.0f64;
            let mut poch = 1.0f64;
            for k in 0..60 {
                if k > 0 {
                    let qk = q.powi(2 * k);
                    poch *= (1.0 - qk) * (1.0 - qk);
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                j += sign * q.powi(k * (k + 1)) * t.powi(2 * k) / poch;
                if q.powi(k * (k + 1)) * t.powi(2 * k) < 1e-300 {
                    break;
                }
            }
            total += (1.0 - q) * t * (-t * t / 2.0).exp() * j * t;
        }
        let expected = 2.0 * total;
        let got = forward(&ctx, &f, 1.0).unwrap();
        assert!(
            (got.value.re - expected).abs() < 1e-10,
            "{} vs {expected}",
            got.value.re
        );
        assert!(!got.is_ill_conditioned());
    }

    #[test]
    fn point_mass_round_trip() {
        let ctx = ctx();
        let f = GridFunction::indicator(*ctx.grid(), 0).unwrap();
        assert!(inversion_residual(&ctx, &f).unwrap() < 1e-8);
    }

    #[test]
    fn dilation_shifts_indices() {
        let grid = QGrid::new(0.5, -4, 4).unwrap();
        let f = GridFunction::indicator(grid, 0).unwrap();
        assert_eq!(dilate(&f, 0), f);
        assert_eq!(dilate(&f, 1), GridFunction::indicator(grid, -1).unwrap());
        assert!(dilate(&GridFunction::indicator(grid, -4).unwrap(), 1).is_zero());
    }

    #[test]
    fn rejects_foreign_grid_and_bad_points() {
        let ctx = ctx();
        let other = GridFunction::zeros(QGrid::new(0.5, -8, 30).unwrap());
        assert!(forward_grid(&ctx, &other).is_err());
        let f = GridFunction::zeros(*ctx.grid());
        assert!(forward(&ctx, &f, 0.0).is_err());
        assert!(forward(&ctx, &f, -1.0).is_err());
        assert!(matches!(
            growth_ratio(&ctx, &f, &[Complex64::new(36.0, 0.0)]),
            Err(Error::Overflow(_))
        ));
        let spec = BesselSeriesSpec::standard(QParams::new(0.5, 0.0).unwrap());
        assert!(TransformContext::new(spec, QGrid::new(0.25, 0, 3).unwrap()).is_err());
    }
}
