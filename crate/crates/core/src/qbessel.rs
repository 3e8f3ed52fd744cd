//! The normalized Hahn-Exton q-Bessel function `j_nu(z, q^2)`.
//!
//! Both exponent conventions reduce to the basic series
//! `phi(y) = sum_k (-1)^k Q^{k(k-1)/2} y^k / ((Q; Q)_k (w; Q)_k)` with
//! `Q = q^2` and `w = q^{2 nu + 2}`:
//!
//! * [`SeriesConvention::SelfDual`] uses `y = q^2 z^2`, i.e. terms
//!   `(-1)^k q^{k(k+1)} z^{2k} / ((q^2; q^2)_k (q^{2nu+2}; q^2)_k)`;
//! * [`SeriesConvention::LinearPower`] uses `y = z`, i.e. terms
//!   `(-1)^k q^{k(k-1)} z^k / (...)`.
//!
//! For `|y| <= 1` the series is summed directly. Beyond that the alternating
//! terms grow far past the result and double precision is lost, so the sum
//! is taken through the parameter-exchange identity
//! `(w; Q)_inf phi(w; y) = (y; Q)_inf phi(y; w)`, which rewrites it as
//! `sum_k (-1)^k Q^{k(k-1)/2} w^k (y Q^k; Q)_inf / (Q; Q)_k` divided by
//! `(w; Q)_inf`. On lattice arguments `y = q^e` the products there vanish
//! exactly for the leading indices, which is what makes the kernel tiny at
//! large lattice points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qnum::{lattice_exponent, qpochhammer_infinite, CompensatedSum, QGrid, QParams};

/// Hard cap on the number of series terms per evaluation.
pub const MAX_TERMS: usize = 500;

/// Default relative truncation threshold, below double-precision roundoff.
pub const DEFAULT_TERM_TOLERANCE: f64 = 1e-17;

/// Condition estimates above this mark a kernel value as ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e8;

/// `|y|` at which evaluation switches from the direct to the exchanged series.
const DIRECT_RADIUS: f64 = 1.0;

/// Which power of `z` and `q` enters the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SeriesConvention {
    /// `q^{k(k+1)} z^{2k}` at base `q^2`; the kernel under which the
    /// transform is an involution.
    #[default]
    SelfDual,
    /// `q^{k(k-1)} z^k` at base `q^2`.
    LinearPower,
}

impl SeriesConvention {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SelfDual => "self-dual",
            Self::LinearPower => "linear",
        }
    }
}

/// Everything needed to evaluate `j_nu(., q^2)`: parameters, convention, and
/// the relative truncation threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselSeriesSpec {
    params: QParams,
    convention: SeriesConvention,
    term_tolerance: f64,
}

impl BesselSeriesSpec {
    pub fn new(params: QParams, convention: SeriesConvention, term_tolerance: f64) -> Result<Self> {
        if !(term_tolerance > 0.0 && term_tolerance <= 1e-6) {
            return Err(Error::InvalidTolerance(term_tolerance));
        }
        Ok(Self {
            params,
            convention,
            term_tolerance,
        })
    }

    /// Self-dual convention with the default tolerance.
    pub fn standard(params: QParams) -> Self {
        Self {
            params,
            convention: SeriesConvention::SelfDual,
            term_tolerance: DEFAULT_TERM_TOLERANCE,
        }
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn convention(&self) -> SeriesConvention {
        self.convention
    }

    pub fn term_tolerance(&self) -> f64 {
        self.term_tolerance
    }

    pub fn with_tolerance(&self, term_tolerance: f64) -> Result<Self> {
        Self::new(self.params, self.convention, term_tolerance)
    }

    fn base(&self) -> f64 {
        self.params.q() * self.params.q()
    }

    fn w(&self) -> f64 {
        self.params.q().powf(2.0 * self.params.nu() + 2.0)
    }
}

/// How a value was summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesRoute {
    Direct,
    Exchanged,
}

/// A kernel value with its summation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: Complex64,
    /// Number of series terms accumulated.
    pub terms: usize,
    /// Largest term magnitude over the magnitude of the sum; infinite when the
    /// sum is exactly zero.
    pub condition: f64,
    pub route: SeriesRoute,
}

impl BesselValue {
    pub fn is_ill_conditioned(&self) -> bool {
        self.condition > ILL_CONDITIONED
    }
}

/// The series argument `y`, either a general complex number or an exact
/// lattice point `q^e`.
#[derive(Debug, Clone, Copy)]
enum SeriesArg {
    Value(Complex64),
    Lattice(i32),
}

impl SeriesArg {
    fn norm(&self, q: f64) -> f64 {
        match *self {
            Self::Value(y) => y.norm(),
            Self::Lattice(e) => q.powi(e),
        }
    }

    fn value(&self, q: f64) -> Complex64 {
        match *self {
            Self::Value(y) => y,
            Self::Lattice(e) => Complex64::from(q.powi(e)),
        }
    }

    /// `1 - y Q^j` with `Q = q^2`, exact zero on the lattice when `e + 2j = 0`.
    fn shifted_factor(&self, q: f64, j: usize) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Self::Value(y) => one - y * q.powi(2 * j as i32),
            Self::Lattice(e) => one - q.powi(e + 2 * j as i32),
        }
    }
}

fn series_arg(spec: &BesselSeriesSpec, z: Complex64) -> SeriesArg {
    let q = spec.params.q();
    if z.im == 0.0 && z.re != 0.0 {
        match spec.convention {
            SeriesConvention::SelfDual => {
                if let Some(k) = lattice_exponent(q, z.re.abs()) {
                    if let Some(e) = k.checked_mul(2).and_then(|e| e.checked_add(2)) {
                        return SeriesArg::Lattice(e);
                    }
                }
            }
            SeriesConvention::LinearPower => {
                if let Some(k) = lattice_exponent(q, z.re) {
                    return SeriesArg::Lattice(k);
                }
            }
        }
    }
    match spec.convention {
        SeriesConvention::SelfDual => SeriesArg::Value(z * z * (q * q)),
        SeriesConvention::LinearPower => SeriesArg::Value(z),
    }
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteArgument(z.to_string()))
    }
}

/// Evaluates `j_nu(z, q^2)`, choosing the summation route from `|y|`.
///
/// Real arguments that sit on the lattice `+-q^k` (to about `1e-10` in the
/// exponent) are evaluated as exact lattice points.
pub fn eval_j(spec: &BesselSeriesSpec, z: Complex64) -> Result<BesselValue> {
    check_finite(z)?;
    let arg = series_arg(spec, z);
    eval_arg(spec, arg, z)
}

/// `j_nu(q^k, q^2)` at an exact lattice point.
pub fn eval_j_lattice(spec: &BesselSeriesSpec, k: i32) -> Result<BesselValue> {
    let arg = match spec.convention {
        SeriesConvention::SelfDual => SeriesArg::Lattice(2 * k + 2),
        SeriesConvention::LinearPower => SeriesArg::Lattice(k),
    };
    eval_arg(spec, arg, Complex64::from(spec.params.q().powi(k)))
}

/// Evaluates `j_nu(z, q^2)` by a fixed route, regardless of `|z|`.
pub fn eval_j_via(
    spec: &BesselSeriesSpec,
    z: Complex64,
    route: SeriesRoute,
) -> Result<BesselValue> {
    check_finite(z)?;
    let arg = series_arg(spec, z);
    match route {
        SeriesRoute::Direct => direct_sum(spec, arg, z),
        SeriesRoute::Exchanged => exchanged_sum(spec, arg, z),
    }
}

fn eval_arg(spec: &BesselSeriesSpec, arg: SeriesArg, z: Complex64) -> Result<BesselValue> {
    if arg.norm(spec.params.q()) <= DIRECT_RADIUS {
        direct_sum(spec, arg, z)
    } else {
        exchanged_sum(spec, arg, z)
    }
}

fn condition(max_term: f64, sum: Complex64) -> f64 {
    let s = sum.norm();
    if s == 0.0 {
        if max_term == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        max_term / s
    }
}

fn non_convergence(z: Complex64) -> Error {
    Error::NonConvergence {
        z: z.to_string(),
        terms: MAX_TERMS,
    }
}

fn direct_sum(spec: &BesselSeriesSpec, arg: SeriesArg, z: Complex64) -> Result<BesselValue> {
    let q = spec.params.q();
    let base = spec.base();
    let w = spec.w();
    let y = arg.value(q);
    let tol = spec.term_tolerance;

    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = CompensatedSum::new();
    acc.add(term);
    let mut max_term = 1.0f64;
    let mut base_pow = 1.0; // Q^{k-1}
                            // `k` terms have been accumulated at the top of each pass.
    for k in 1..=MAX_TERMS {
        let qk = base_pow * base;
        term *= -y * base_pow / ((1.0 - qk) * (1.0 - w * base_pow));
        base_pow = qk;
        let sum = acc.value();
        if term.norm() < tol * (sum.norm() + 1.0) {
            return Ok(BesselValue {
                value: sum,
                terms: k,
                condition: condition(max_term, sum),
                route: SeriesRoute::Direct,
            });
        }
        if k == MAX_TERMS {
            break;
        }
        acc.add(term);
        max_term = max_term.max(term.norm());
    }
    Err(non_convergence(z))
}

fn exchanged_sum(spec: &BesselSeriesSpec, arg: SeriesArg, z: Complex64) -> Result<BesselValue> {
    let q = spec.params.q();
    let base = spec.base();
    let w = spec.w();
    let tol = spec.term_tolerance;
    let y_norm = arg.norm(q);

    // First index from which |y| Q^k <= 1/2; beyond it the shifted products
    // stay bounded away from zero.
    let mut settled = 0usize;
    while y_norm * base.powi(settled as i32) > 0.5 {
        settled += 1;
        if settled >= MAX_TERMS {
            return Err(non_convergence(z));
        }
    }

    // products[k] = (y Q^k; Q)_inf for k <= settled, built downward so exact
    // lattice zeros propagate instead of being divided out.
    let start = match arg {
        SeriesArg::Value(y) => y * base.powi(settled as i32),
        SeriesArg::Lattice(e) => Complex64::from(q.powi(e + 2 * settled as i32)),
    };
    let (tail, _) = qpochhammer_infinite(start, base)?;
    let mut products = vec![Complex64::new(0.0, 0.0); settled + 1];
    products[settled] = tail;
    for k in (0..settled).rev() {
        products[k] = products[k + 1] * arg.shifted_factor(q, k);
    }

    let (w_inf, _) = qpochhammer_infinite(w, base)?;
    let mut coeff = 1.0f64; // (-1)^k Q^{k(k-1)/2} w^k / (Q; Q)_k
    let mut product = products[0];
    let mut acc = CompensatedSum::new();
    let mut max_term = 0.0f64;
    let mut base_pow = 1.0; // Q^k
    for k in 0..MAX_TERMS {
        if k > 0 {
            let qk = base_pow * base;
            coeff *= -w * base_pow / (1.0 - qk);
            base_pow = qk;
            product = match products.get(k) {
                Some(p) => *p,
                None => product / arg.shifted_factor(q, k - 1),
            };
        }
        let term = product * coeff;
        let sum = acc.value();
        // Past `settled` consecutive terms shrink at least by `ratio`.
        let ratio = w * base_pow / ((1.0 - base) * 0.5);
        if k > settled && ratio < 0.5 && term.norm() <= tol * sum.norm() {
            let value = sum / w_inf;
            return Ok(BesselValue {
                value,
                terms: k,
                condition: condition(max_term, sum),
                route: SeriesRoute::Exchanged,
            });
        }
        acc.add(term);
        max_term = max_term.max(term.norm());
    }
    Err(non_convergence(z))
}

/// Unit vector of the `j`-th of `count` equally spaced rays, exact on the axes.
pub fn ray(j: usize, count: usize) -> Complex64 {
    let j = j % count;
    if (4 * j).is_multiple_of(count) {
        match 4 * j / count {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * j as f64 / count as f64)
    }
}

/// A sampled growth constant for `|z|^{2p} |j_nu(z, q^2)| <= sigma_p e^{|z|}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEstimate {
    pub p: u32,
    /// Sampled supremum inflated by [`SIGMA_MARGIN`].
    pub sigma_p: f64,
    /// The sampled supremum itself.
    pub sampled_max: f64,
    pub sample_max_at: Complex64,
    pub probes: usize,
}

/// Relative margin added on top of the sampled supremum.
pub const SIGMA_MARGIN: f64 = 0.10;

/// Probe points used by [`estimate_sigma_p`]: the origin and every grid
/// magnitude along each of `directions` rays.
pub fn probe_points(probe_grid: &QGrid, directions: usize) -> Vec<Complex64> {
    let mut points = vec![Complex64::new(0.0, 0.0)];
    for n in probe_grid.indices() {
        let r = probe_grid.point(n);
        points.extend((0..directions).map(|j| ray(j, directions) * r));
    }
    points
}

/// `|z|^{2p} |j(z)| / e^{|z|}` at one point.
pub fn growth_ratio_at(spec: &BesselSeriesSpec, p: u32, z: Complex64) -> Result<f64> {
    let r = z.norm();
    if r >= 700.0 {
        return Err(Error::Overflow(r));
    }
    let j = eval_j(spec, z)?.value.norm();
    Ok(r.powi(2 * p as i32) * j / r.exp())
}

/// Estimates `sigma_p` as `1.1 x` the largest ratio over the probe set.
pub fn estimate_sigma_p(
    spec: &BesselSeriesSpec,
    p: u32,
    probe_grid: &QGrid,
    directions: usize,
) -> Result<BoundEstimate> {
    if directions == 0 {
        return Err(Error::InvalidArgument(
            "at least one ray is required".into(),
        ));
    }
    let points = probe_points(probe_grid, directions);
    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for &z in &points {
        let ratio = growth_ratio_at(spec, p, z)?;
        if ratio > best.0 {
            best = (ratio, z);
        }
    }
    Ok(BoundEstimate {
        p,
        sigma_p: (1.0 + SIGMA_MARGIN) * best.0,
        sampled_max: best.0,
        sample_max_at: best.1,
        probes: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(q: f64, nu: f64) -> BesselSeriesSpec {
        BesselSeriesSpec::standard(QParams::new(q, nu).unwrap())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn value_at_origin_is_one() {
        for conv in [SeriesConvention::SelfDual, SeriesConvention::LinearPower] {
            let s = BesselSeriesSpec::new(QParams::new(0.5, 0.0).unwrap(), conv, 1e-17).unwrap();
            let v = eval_j(&s, c(0.0)).unwrap();
            assert_eq!(v.value, c(1.0));
            assert_eq!(v.terms, 1);
        }
    }

    #[test]
    fn small_argument_two_term_expansion() {
        // 1 - q^2 z^2 / ((1 - q^2)(1 - q^2)) + O(z^4) at q = 0.5, nu = 0, z = 0.1.
        let v = eval_j(&spec(0.5, 0.0), c(0.1)).unwrap().value;
        let two_terms = 1.0 - 0.25 * 0.01 / (0.75 * 0.75);
        assert!((v.re - two_terms).abs() < 4e-6, "{}", v.re);
        // third term q^6 z^4 / ((q^2;q^2)_2)^2
        let third = 0.5f64.powi(6) * 1e-4 / (0.75 * 0.9375f64).powi(2);
        assert!((v.re - (two_terms + third)).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_tolerance_and_arguments() {
        let p = QParams::new(0.5, 0.0).unwrap();
        assert!(BesselSeriesSpec::new(p, SeriesConvention::SelfDual, 0.0).is_err());
        assert!(BesselSeriesSpec::new(p, SeriesConvention::SelfDual, 1e-5).is_err());
        assert!(BesselSeriesSpec::new(p, SeriesConvention::SelfDual, 1e-6).is_ok());
        assert!(eval_j(&spec(0.5, 0.0), Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn lattice_value_at_eight_is_tiny_and_bounded() {
        // j_0(q^-3, q^2) at q = 1/2: exchanged terms k < 3 vanish exactly and
        // the k = 3 term is about -3.7e-4.
        let s = spec(0.5, 0.0);
        let v = eval_j(&s, c(8.0)).unwrap();
        assert_eq!(v.route, SeriesRoute::Exchanged);
        assert!(v.value.norm() < 1e-2);
        assert!(v.value.norm() <= 1.0 * 8f64.exp());
        assert_eq!(v.value, eval_j_lattice(&s, -3).unwrap().value);
    }

    #[test]
    fn both_routes_agree_where_both_are_accurate() {
        let s = spec(0.5, 0.5);
        for z in [
            c(1.5),
            c(2.3),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.3, -2.0),
            Complex64::new(-2.5, 0.7),
        ] {
            let a = eval_j_via(&s, z, SeriesRoute::Direct).unwrap();
            let b = eval_j_via(&s, z, SeriesRoute::Exchanged).unwrap();
            let scale = a.value.norm().max(1.0);
            assert!(
                (a.value - b.value).norm() < 1e-13 * scale * a.condition.max(1.0),
                "{z}"
            );
        }
    }

    #[test]
    fn real_arguments_give_real_values() {
        for conv in [SeriesConvention::SelfDual, SeriesConvention::LinearPower] {
            let s = BesselSeriesSpec::new(QParams::new(0.7, 0.3).unwrap(), conv, 1e-17).unwrap();
            for x in [0.01, 0.5, 1.0, 3.3, 17.0, 64.0] {
                let v = eval_j(&s, c(x)).unwrap().value;
                assert!(v.im.abs() <= 1e-14 * v.norm());
            }
        }
    }

    #[test]
    fn convergence_cap_reports_error() {
        let s = spec(0.999, 0.0);
        let err = eval_j(&s, c(1e30)).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn sigma_zero_covers_origin() {
        let s = spec(0.5, 0.0);
        let g = QGrid::new(0.5, -6, 8).unwrap();
        let est = estimate_sigma_p(&s, 0, &g, 8).unwrap();
        assert!(est.sigma_p >= 1.0);
        assert!(est.sampled_max >= 1.0);
        assert_eq!(est.probes, 1 + 8 * 15);
    }

    #[test]
    fn overflow_guard() {
        let s = spec(0.5, 0.0);
        let g = QGrid::new(0.5, -10, 0).unwrap();
        assert!(matches!(
            estimate_sigma_p(&s, 0, &g, 4),
            Err(Error::Overflow(_))
        ));
        assert!(estimate_sigma_p(&s, 0, &g, 0).is_err());
    }

    #[test]
    fn rays_are_exact_on_axes() {
        assert_eq!(ray(0, 8), c(1.0));
        assert_eq!(ray(2, 8), Complex64::new(0.0, 1.0));
        assert_eq!(ray(4, 8), c(-1.0));
        assert_eq!(ray(6, 8), Complex64::new(0.0, -1.0));
        assert!((ray(1, 8).norm() - 1.0).abs() < 1e-15);
    }
}
