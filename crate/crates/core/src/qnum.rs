//! q-calculus building blocks: q-Pochhammer symbols, finite windows of the
//! geometric lattice `{q^n : n in Z}`, functions sampled on such windows, and
//! Jackson q-integration over `[0, inf)`.
//!
//! Every bilateral Jackson sum is truncated to an explicit [`QGrid`] window.
//! The caller owns the window; [`window_stability`] reports how much a result
//! moves when the window is widened.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation threshold for infinite products: stop once `|a| q^i` drops below it.
const INFINITE_PRODUCT_CUTOFF: f64 = 1e-17;
const MAX_PRODUCT_FACTORS: usize = 10_000_000;

/// The pair `(q, nu)` that parameterizes the q-Bessel transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    q: f64,
    nu: f64,
}

impl QParams {
    pub fn new(q: f64, nu: f64) -> Result<Self> {
        check_q(q)?;
        if !(nu.is_finite() && nu > -1.0) {
            return Err(Error::InvalidOrder(nu));
        }
        Ok(Self { q, nu })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Exponent `2 nu + 1` of the radial weight `x^{2 nu + 1}`.
    pub fn weight_exponent(&self) -> f64 {
        2.0 * self.nu + 1.0
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidQ(q))
    }
}

/// Number of factors in a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerOrder {
    Finite(usize),
    Infinite,
}

/// The q-Pochhammer symbol `(a; q)_n = prod_{i<n} (1 - a q^i)`.
///
/// For [`PochhammerOrder::Infinite`] the product is truncated as described in
/// [`qpochhammer_infinite`].
pub fn qpochhammer(a: impl Into<Complex64>, q: f64, order: PochhammerOrder) -> Result<Complex64> {
    let a = a.into();
    check_q(q)?;
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::NonFiniteArgument(a.to_string()));
    }
    match order {
        PochhammerOrder::Finite(n) => {
            let mut prod = Complex64::new(1.0, 0.0);
            for i in 0..n {
                prod *= factor(a, q, i);
            }
            Ok(prod)
        }
        PochhammerOrder::Infinite => qpochhammer_infinite(a, q).map(|(value, _)| value),
    }
}

#[inline]
fn factor(a: Complex64, q: f64, i: usize) -> Complex64 {
    let qi = if i <= i32::MAX as usize {
        q.powi(i as i32)
    } else {
        q.powf(i as f64)
    };
    Complex64::new(1.0, 0.0) - a * qi
}

/// `(a; q)_inf` together with a bound on `|log|` of the discarded tail.
///
/// Factors are multiplied until `|a| q^i < 1e-17`; the neglected tail then
/// satisfies `|log prod_{j >= i} (1 - a q^j)| <= 2 |a| q^i / (1 - q)`, which is
/// the returned bound.
pub fn qpochhammer_infinite(a: impl Into<Complex64>, q: f64) -> Result<(Complex64, f64)> {
    let a = a.into();
    check_q(q)?;
    let mag = a.norm();
    if !mag.is_finite() {
        return Err(Error::NonFiniteArgument(a.to_string()));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    let mut i = 0usize;
    loop {
        let qi = q.powi(i.min(i32::MAX as usize) as i32);
        if mag * qi < INFINITE_PRODUCT_CUTOFF {
            return Ok((prod, 2.0 * mag * qi / (1.0 - q)));
        }
        if i >= MAX_PRODUCT_FACTORS {
            return Err(Error::NonConvergence {
                z: a.to_string(),
                terms: i,
            });
        }
        prod *= Complex64::new(1.0, 0.0) - a * qi;
        i += 1;
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        neumaier(&mut self.re, x.re);
        neumaier(&mut self.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

#[inline]
fn neumaier(acc: &mut (f64, f64), x: f64) {
    let (sum, comp) = acc;
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// A finite window `{q^n : n_min <= n <= n_max}` of the lattice `R_q^+`.
///
/// `n_min` indexes the largest point and `n_max` the smallest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGrid {
    q: f64,
    n_min: i32,
    n_max: i32,
}

impl QGrid {
    pub fn new(q: f64, n_min: i32, n_max: i32) -> Result<Self> {
        check_q(q)?;
        if n_min > n_max {
            return Err(Error::EmptyWindow { n_min, n_max });
        }
        Ok(Self { q, n_min, n_max })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    pub fn n_max(&self) -> i32 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        (self.n_max as i64 - self.n_min as i64 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The lattice point `q^n` (defined for any integer `n`, not only in-window).
    #[inline]
    pub fn point(&self, n: i32) -> f64 {
        self.q.powi(n)
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.n_min..=self.n_max
    }

    pub fn contains(&self, n: i32) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    pub fn position(&self, n: i32) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }

    /// The same lattice with `extra` indices added at both ends.
    pub fn widened(&self, extra: i32) -> Result<Self> {
        Self::new(self.q, self.n_min - extra, self.n_max + extra)
    }

    /// Lattice index of `x` if `x` is `q^n` up to a relative error of about `1e-10`.
    pub fn lattice_index(&self, x: f64) -> Option<i32> {
        lattice_exponent(self.q, x)
    }
}

/// Integer `n` with `x = q^n` when `x > 0` sits on the lattice within `1e-10`
/// in the exponent.
pub fn lattice_exponent(q: f64, x: f64) -> Option<i32> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let e = x.ln() / q.ln();
    let n = e.round();
    ((e - n).abs() <= 1e-10 && n.abs() < i32::MAX as f64).then_some(n as i32)
}

/// An even function sampled on a [`QGrid`]; `values[i]` is `f(q^{n_min + i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: QGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: QGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite(grid.n_min + i as i32));
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: QGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values.into_iter().map(Complex64::from).collect())
    }

    /// Samples `f` at every lattice point of the window.
    pub fn from_fn(grid: QGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.indices().map(|n| f(grid.point(n))).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: QGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Indicator of the single lattice point `q^{n0}`.
    pub fn indicator(grid: QGrid, n0: i32) -> Result<Self> {
        let pos = grid.position(n0).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "index {n0} outside window [{}, {}]",
                grid.n_min, grid.n_max
            ))
        })?;
        let mut f = Self::zeros(grid);
        f.values[pos] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    /// `x -> amplitude * exp(-rate x^2)` on the window.
    pub fn gaussian(grid: QGrid, amplitude: f64, rate: f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::from(amplitude * (-rate * x * x).exp()))
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at lattice index `n`, or `None` outside the window.
    pub fn get(&self, n: i32) -> Option<Complex64> {
        self.grid.position(n).map(|i| self.values[i])
    }

    /// `(n, q^n, f(q^n))` triples in window order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64, Complex64)> + '_ {
        self.grid
            .indices()
            .zip(&self.values)
            .map(|(n, v)| (n, self.grid.point(n), *v))
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * alpha).collect(),
        }
    }

    /// `alpha * self + beta * other` on a shared grid.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "linear combination of functions on different grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Self::new(self.grid, values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|f - g|` over the window.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "distance between functions on different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }
}

/// Jackson sum `(1 - q) sum_n q^n g(n, q^n)` over the window.
///
/// Terms are accumulated from `n_max` (smallest points) down to `n_min` with
/// compensated summation, so the result is independent of the caller.
pub fn jackson_integral_with(grid: &QGrid, integrand: impl Fn(i32, f64) -> Complex64) -> Complex64 {
    let mut acc = CompensatedSum::new();
    for n in grid.indices().rev() {
        let x = grid.point(n);
        acc.add(integrand(n, x) * x);
    }
    acc.value() * (1.0 - grid.q())
}

/// Truncated Jackson q-integral `int_0^inf f(x) d_q x` of a sampled function.
pub fn jackson_integral(f: &GridFunction) -> Complex64 {
    let values = f.values();
    let n_min = f.grid().n_min();
    jackson_integral_with(f.grid(), |n, _| values[(n - n_min) as usize])
}

/// Weighted norm `int_0^inf |f(x)| x^{2 nu + 1} d_q x`.
pub fn norm_l1(f: &GridFunction, params: &QParams) -> Result<f64> {
    if f.grid().q() != params.q() {
        return Err(Error::BaseMismatch {
            grid: f.grid().q(),
            params: params.q(),
        });
    }
    let values = f.values();
    let n_min = f.grid().n_min();
    let w = params.weight_exponent();
    let total = jackson_integral_with(f.grid(), |n, x| {
        Complex64::from(values[(n - n_min) as usize].norm() * x.powf(w))
    });
    Ok(total.re)
}

/// Jackson integrals of one integrand on a window and on its widening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStability {
    pub base: Complex64,
    pub widened: Complex64,
    pub relative_change: f64,
}

/// Compares the Jackson integral of `integrand` on `grid` with the one on the
/// window widened by `extra` indices at each end.
pub fn window_stability(
    grid: &QGrid,
    extra: i32,
    integrand: impl Fn(f64) -> Complex64,
) -> Result<WindowStability> {
    let base = jackson_integral_with(grid, |_, x| integrand(x));
    let widened = jackson_integral_with(&grid.widened(extra)?, |_, x| integrand(x));
    let scale = base.norm().max(widened.norm());
    let relative_change = if scale == 0.0 {
        0.0
    } else {
        (widened - base).norm() / scale
    };
    Ok(WindowStability {
        base,
        widened,
        relative_change,
    })
}
