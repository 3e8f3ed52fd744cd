//! Gaussian-decay verifier for the q-Bessel Fourier transform.
//!
//! A function `f` on the window and its transform `F f` are each given a
//! sup-form envelope `C e^{-rate x^2}`. The product `p * sigma` of the two
//! rates is compared with `1/4`:
//!
//! * `p sigma = 1/4` pins `f` to the one-parameter family
//!   `A c_{q,nu} F(e^{-sigma t^2})`,
//! * `p sigma > 1/4` forces `f = 0`,
//!
//! provided some lattice point `a = q^k` satisfies `a^2 p = 1/2`.
//!
//! Everything here is relative to the finite window: a grid can witness an
//! envelope but never prove it on all of `R_q^+`. On the lattice the kernel
//! decays only like `exp(-c log^2 x)`, so transforms of Gaussians are far
//! from Gaussian at the large end of the window and their measured rates are
//! small.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qnum::{jackson_integral_with, GridFunction};
use crate::qtransform::{forward_grid, TransformContext};

/// Default tolerance on `|p sigma - 1/4|`.
pub const DEFAULT_CLASSIFICATION_TOLERANCE: f64 = 0.05;

/// Relative tolerance for the lattice condition `a^2 p = 1/2`.
pub const LATTICE_CONDITION_TOLERANCE: f64 = 1e-9;

/// Dilation exponents searched for `a = q^k`.
pub const DILATION_SEARCH: std::ops::RangeInclusive<i32> = -20..=20;

/// Indices skipped at each end of the window when fitting `A`.
pub const FIT_MARGIN: i32 = 2;

/// Relative headroom `C = (1 + delta) max|f|` tried by [`measure_decay`].
const HEADROOM: [f64; 7] = [1e-9, 1e-6, 1e-3, 1e-2, 1e-1, 1.0, 10.0];

/// A claimed or measured envelope `|f(x)| <= constant * exp(-rate x^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub constant: f64,
    pub rate: f64,
}

impl DecayBound {
    /// Envelope reported for the zero function: `constant = 0`, `rate = inf`.
    pub const ZERO_FUNCTION: DecayBound = DecayBound {
        constant: 0.0,
        rate: f64::INFINITY,
    };

    pub fn new(constant: f64, rate: f64) -> Result<Self> {
        if !(constant.is_finite() && constant > 0.0 && rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "decay bound needs positive finite constant and rate, got ({constant}, {rate})"
            )));
        }
        Ok(Self { constant, rate })
    }

    pub fn is_zero_sentinel(&self) -> bool {
        self.constant == 0.0 && self.rate == f64::INFINITY
    }

    /// The envelope at `x`.
    pub fn envelope(&self, x: f64) -> f64 {
        if self.is_zero_sentinel() {
            0.0
        } else {
            self.constant * (-self.rate * x * x).exp()
        }
    }
}

/// Outcome of checking a [`DecayBound`] on every window point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCheck {
    pub holds: bool,
    /// Largest `|f(x)| - envelope(x)`; non-positive when the bound holds.
    pub worst_excess: f64,
    pub worst_index: i32,
}

/// Checks `|f(q^n)| <= C e^{-rate q^{2n}}` at every window point.
pub fn decay_check(f: &GridFunction, bound: &DecayBound) -> DecayCheck {
    let mut worst = (f64::NEG_INFINITY, f.grid().n_min());
    for (n, x, v) in f.iter() {
        let excess = v.norm() - bound.envelope(x);
        if excess > worst.0 {
            worst = (excess, n);
        }
    }
    DecayCheck {
        holds: worst.0 <= 0.0,
        worst_excess: worst.0,
        worst_index: worst.1,
    }
}

fn rate_for(f: &GridFunction, constant: f64) -> f64 {
    let log_c = constant.ln();
    f.iter()
        .filter(|(_, _, v)| v.norm() > 0.0)
        .map(|(_, x, v)| (log_c - v.norm().ln()) / (x * x))
        .fold(f64::INFINITY, f64::min)
}

/// Best sup-form Gaussian envelope of `f` over its window.
///
/// Constants `C = (1 + delta) max|f|` are tried for a fixed ladder of
/// `delta`; for each the largest admissible rate is
/// `min_n (ln C - ln|f(q^n)|) / q^{2n}`. The smallest `C` whose rate is
/// within 5% of the best rate on the ladder is returned, with the rate nudged
/// down until the envelope holds exactly in floating point. The zero
/// function yields [`DecayBound::ZERO_FUNCTION`].
pub fn measure_decay(f: &GridFunction) -> DecayBound {
    let peak = f.sup_norm();
    if peak == 0.0 {
        return DecayBound::ZERO_FUNCTION;
    }
    let candidates: Vec<(f64, f64)> = HEADROOM
        .iter()
        .map(|d| {
            let c = peak * (1.0 + d);
            (c, rate_for(f, c))
        })
        .collect();
    let best = candidates
        .iter()
        .map(|(_, r)| *r)
        .fold(f64::NEG_INFINITY, f64::max);
    let (constant, mut rate) = candidates
        .iter()
        .copied()
        .find(|(_, r)| *r >= 0.95 * best)
        .expect("the best candidate qualifies");
    rate *= 1.0 - 1e-12;
    let mut bound = DecayBound { constant, rate };
    while !decay_check(f, &bound).holds {
        bound.rate -= bound.rate.abs() * 1e-10 + f64::MIN_POSITIVE;
    }
    bound
}

/// Position of an input with respect to the `p sigma = 1/4` dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// `p sigma` matches `1/4` and the lattice condition holds.
    ExtremalFamily,
    /// `p sigma > 1/4`, lattice condition holds, and `f` is zero within tolerance.
    MustVanish,
    /// `p sigma < 1/4`, or the lattice condition fails, or claimed bounds do not hold.
    Unconstrained,
    /// `p sigma > 1/4` but `f` is not zero: the envelopes cannot both be right.
    Inconsistent,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExtremalFamily => "extremal-family",
            Self::MustVanish => "must-vanish",
            Self::Unconstrained => "unconstrained",
            Self::Inconsistent => "inconsistent",
        }
    }

    /// Position along the dichotomy, used to check monotone transitions.
    pub fn rank(&self) -> u8 {
        match self {
            Self::Unconstrained => 0,
            Self::ExtremalFamily => 1,
            Self::MustVanish | Self::Inconsistent => 2,
        }
    }
}

/// Everything [`classify`] measured and concluded. All labels are relative
/// to the transform window.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyReport {
    pub bound_f: DecayBound,
    pub bound_transform: DecayBound,
    /// `bound_f.rate * bound_transform.rate`.
    pub product: f64,
    pub classification: Classification,
    /// `A` in `f ~ A c_{q,nu} F(e^{-sigma t^2})`.
    pub fitted_a: Complex64,
    /// The same fit without the `c_{q,nu}` factor: `f ~ K F(e^{-sigma t^2})`.
    pub fitted_const: Complex64,
    /// Relative weighted RMS residual of the fit.
    pub fit_residual: f64,
    /// Whether `a = q^k` with `a^2 p = 1/2` exists for `k` in [`DILATION_SEARCH`].
    pub a_exists: bool,
    pub dilation_index: Option<i32>,
    /// `false` only when claimed envelopes were supplied and fail on the window.
    pub bounds_hold: bool,
    pub sup_norm: f64,
    pub tolerance: f64,
}

/// `k` with `|q^{2k} p - 1/2| <= 1e-9 / 2`, searching [`DILATION_SEARCH`].
pub fn lattice_dilation_for(q: f64, rate: f64) -> Option<i32> {
    if !rate.is_finite() {
        return None;
    }
    DILATION_SEARCH
        .into_iter()
        .find(|&k| (q.powi(2 * k) * rate - 0.5).abs() <= LATTICE_CONDITION_TOLERANCE * 0.5)
}

/// `c_{q,nu} F(e^{-sigma t^2})` on the context window.
pub fn extremal_function(ctx: &TransformContext, sigma: f64) -> Result<GridFunction> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Gaussian rate must be positive, got {sigma}"
        )));
    }
    let g = GridFunction::gaussian(*ctx.grid(), 1.0, sigma)?;
    Ok(forward_grid(ctx, &g)?
        .output
        .scale(Complex64::from(ctx.c())))
}

/// Weighted least-squares fit of `f ~ K e` over interior points, weight
/// `x^{2nu+1}`. Returns `(K, relative residual)`.
fn fit_scalar(ctx: &TransformContext, f: &GridFunction, e: &GridFunction) -> (Complex64, f64) {
    let grid = ctx.grid();
    let w_exp = ctx.params().weight_exponent();
    let lo = grid.n_min() + FIT_MARGIN;
    let hi = grid.n_max() - FIT_MARGIN;
    let mut cross = Complex64::new(0.0, 0.0);
    let mut ee = 0.0;
    let mut ff = 0.0;
    for n in lo..=hi {
        let w = grid.point(n).powf(w_exp);
        let (fv, ev) = (f.get(n).unwrap(), e.get(n).unwrap());
        cross += ev.conj() * fv * w;
        ee += ev.norm_sqr() * w;
        ff += fv.norm_sqr() * w;
    }
    if ff == 0.0 {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    if ee == 0.0 {
        return (Complex64::new(0.0, 0.0), 1.0);
    }
    let k = cross / ee;
    let mut rr = 0.0;
    for n in lo..=hi {
        let w = grid.point(n).powf(w_exp);
        rr += (f.get(n).unwrap() - e.get(n).unwrap() * k).norm_sqr() * w;
    }
    (k, (rr / ff).sqrt())
}

fn build_report(
    ctx: &TransformContext,
    f: &GridFunction,
    bound_f: DecayBound,
    bound_transform: DecayBound,
    bounds_hold: bool,
    tolerance: f64,
) -> Result<HardyReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "classification tolerance must be positive, got {tolerance}"
        )));
    }
    let q = ctx.grid().q();
    let sup_norm = f.sup_norm();
    let is_zero = f.is_zero();
    let product = if is_zero {
        f64::INFINITY
    } else {
        bound_f.rate * bound_transform.rate
    };
    // The zero function meets every envelope, in particular p = 1/2 with a = 1.
    let dilation_index = if is_zero {
        Some(0)
    } else {
        lattice_dilation_for(q, bound_f.rate)
    };
    let a_exists = dilation_index.is_some();

    let classification = if !bounds_hold {
        Classification::Unconstrained
    } else if (product - 0.25).abs() <= tolerance {
        if a_exists {
            Classification::ExtremalFamily
        } else {
            Classification::Unconstrained
        }
    } else if product > 0.25 + tolerance {
        match (a_exists, sup_norm > tolerance) {
            (false, _) => Classification::Unconstrained,
            (true, true) => Classification::Inconsistent,
            (true, false) => Classification::MustVanish,
        }
    } else {
        Classification::Unconstrained
    };

    let sigma = bound_transform.rate;
    let (fitted_const, fit_residual) = if is_zero || !(sigma.is_finite() && sigma > 0.0) {
        (Complex64::new(0.0, 0.0), 0.0)
    } else {
        let g = GridFunction::gaussian(*ctx.grid(), 1.0, sigma)?;
        let e = forward_grid(ctx, &g)?.output;
        fit_scalar(ctx, f, &e)
    };

    Ok(HardyReport {
        bound_f,
        bound_transform,
        product,
        classification,
        fitted_a: fitted_const / ctx.c(),
        fitted_const,
        fit_residual,
        a_exists,
        dilation_index,
        bounds_hold,
        sup_norm,
        tolerance,
    })
}

/// Measures the envelopes of `f` and `F f` on the window and classifies the
/// rate product against `1/4`.
pub fn classify(f: &GridFunction, ctx: &TransformContext, tolerance: f64) -> Result<HardyReport> {
    let transform = forward_grid(ctx, f)?.output;
    let bound_f = measure_decay(f);
    let bound_transform = measure_decay(&transform);
    build_report(ctx, f, bound_f, bound_transform, true, tolerance)
}

/// Classifies with caller-supplied envelopes for `f` and `F f`.
///
/// Both claims are checked on the window first; if either fails the report
/// carries `bounds_hold = false` and the label `Unconstrained`.
pub fn classify_claimed(
    f: &GridFunction,
    ctx: &TransformContext,
    claimed_f: DecayBound,
    claimed_transform: DecayBound,
    tolerance: f64,
) -> Result<HardyReport> {
    let transform = forward_grid(ctx, f)?.output;
    let holds =
        decay_check(f, &claimed_f).holds && decay_check(&transform, &claimed_transform).holds;
    let mut report = build_report(ctx, f, claimed_f, claimed_transform, holds, tolerance)?;
    if !f.is_zero() {
        return Ok(report);
    }
    // For the zero function the claimed rates, not the sentinel, decide.
    report.product = claimed_f.rate * claimed_transform.rate;
    report.dilation_index = lattice_dilation_for(ctx.grid().q(), claimed_f.rate);
    report.a_exists = report.dilation_index.is_some();
    report.classification = if !holds || !report.a_exists {
        Classification::Unconstrained
    } else if (report.product - 0.25).abs() <= tolerance {
        Classification::ExtremalFamily
    } else if report.product > 0.25 + tolerance {
        Classification::MustVanish
    } else {
        Classification::Unconstrained
    };
    Ok(report)
}

/// The limit density `x -> c_{q,nu} F(e^{-sigma t^2})(x)` with its observed
/// Jackson mass and minimum. Neither positivity nor unit mass is assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitDensity {
    pub density: GridFunction,
    /// `int density(x) x^{2nu+1} d_q x` over the window.
    pub mass: f64,
    pub min_value: f64,
    pub min_index: i32,
    /// Number of sign changes of the real part across the window.
    pub sign_changes: usize,
}

pub fn clt_limit_density(ctx: &TransformContext, sigma: f64) -> Result<LimitDensity> {
    let density = extremal_function(ctx, sigma)?;
    let w_exp = ctx.params().weight_exponent();
    let values = density.values();
    let n_min = density.grid().n_min();
    let mass = jackson_integral_with(density.grid(), |n, x| {
        values[(n - n_min) as usize] * x.powf(w_exp)
    })
    .re;
    let (min_index, min_value) =
        density
            .iter()
            .map(|(n, _, v)| (n, v.re))
            .fold(
                (n_min, f64::INFINITY),
                |acc, (n, v)| if v < acc.1 { (n, v) } else { acc },
            );
    let sign_changes = values
        .windows(2)
        .filter(|w| w[0].re != 0.0 && w[1].re != 0.0 && (w[0].re > 0.0) != (w[1].re > 0.0))
        .count();
    Ok(LimitDensity {
        density,
        mass,
        min_value,
        min_index,
        sign_changes,
    })
}
