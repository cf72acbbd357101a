//! Curry–Schoenberg B-splines `M(t_1, ..., t_n; t)` with simple knots.
//!
//! `M` is the piecewise polynomial of degree `n - 2` supported on
//! `[t_1, t_n]`, `C^{n-3}` at the knots and normalised to unit integral.
//! Two evaluators are provided and cross-checked in tests:
//!
//! * [`mspline_eval`] uses the truncated-power representation
//!   `M(t) = (n - 1) * g_t[t_1, ..., t_n]` with `g_t(s) = (s - t)_+^{n-2}`.
//!   It is short and transparent but loses digits as the order grows.
//! * [`mspline_eval_stable`] runs the Cox–de Boor recurrence on the
//!   normalised B-spline and rescales it by `(n - 1) / (t_n - t_1)`.
//!
//! All evaluators are right-continuous: the value at an interior knot is
//! the limit from the right and `M(t_n) = 0`.

use crate::error::{Error, Result};
use crate::numerics::{composite_gauss_legendre, divided_difference, factorial};

/// Largest spline order (number of knots) accepted anywhere in the crate.
pub const MAX_SPLINE_ORDER: usize = 18;

/// Strictly increasing knots `t_1 < ... < t_n` of one M-spline, `2 <= n <= 18`.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::TooFewKnots {
                min: 2,
                got: knots.len(),
            });
        }
        if knots.len() > MAX_SPLINE_ORDER {
            return Err(Error::OrderTooLarge {
                order: knots.len(),
                max: MAX_SPLINE_ORDER,
            });
        }
        if knots.iter().any(|t| !t.is_finite()) {
            return Err(Error::KnotsNotIncreasing);
        }
        for w in knots.windows(2) {
            if w[0] == w[1] {
                return Err(Error::CoincidentKnots);
            }
            if w[0] > w[1] {
                return Err(Error::KnotsNotIncreasing);
            }
        }
        Ok(Self { knots })
    }

    /// Number of knots; the spline has polynomial degree `order - 2`.
    pub fn order(&self) -> usize {
        self.knots.len()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn first(&self) -> f64 {
        self.knots[0]
    }

    pub fn last(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn support(&self) -> (f64, f64) {
        (self.first(), self.last())
    }

    /// True when the knots are an odd function of their index, `t_i = -t_{n+1-i}`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.knots.len();
        (0..n).all(|i| self.knots[i] == -self.knots[n - 1 - i])
    }
}

/// Reflected window `(-x_{s+m}, ..., -x_s, x_s, ..., x_{s+m})` with `2m + 2`
/// knots, where `s = start` is a zero-based index into `x`.
pub fn symmetric_knots(x: &[f64], start: usize, m: usize) -> Result<KnotVector> {
    let end = start + m;
    if end >= x.len() {
        return Err(Error::KnotWindowOutOfRange {
            start,
            len: m,
            available: x.len(),
        });
    }
    let window = &x[start..=end];
    if window[0] <= 0.0 {
        return Err(Error::ReflectedKnotCollision);
    }
    let knots: Vec<f64> = window
        .iter()
        .rev()
        .map(|v| -v)
        .chain(window.iter().copied())
        .collect();
    KnotVector::new(knots)
}

fn truncated_power(x: f64, degree: usize) -> f64 {
    if x <= 0.0 {
        0.0
    } else if degree == 0 {
        1.0
    } else {
        x.powi(degree as i32)
    }
}

/// Reference evaluator through the truncated-power divided difference.
pub fn mspline_eval(kv: &KnotVector, t: f64) -> f64 {
    if let Some(u) = reflect(kv, t) {
        return mspline_eval(kv, u);
    }
    let (a, b) = kv.support();
    if !(a..b).contains(&t) {
        return 0.0;
    }
    let n = kv.order();
    let degree = n - 2;
    // (s - t)^d has zero divided difference over n knots, so truncating on
    // the side with fewer knots gives the same value with less cancellation
    let right = kv.knots().iter().filter(|&&k| k > t).count();
    let dd = if right <= n / 2 {
        divided_difference(|s| truncated_power(s - t, degree), kv.knots())
    } else {
        let sign = if degree.is_multiple_of(2) { -1.0 } else { 1.0 };
        divided_difference(|s| truncated_power(t - s, degree), kv.knots()).map(|v| sign * v)
    }
    .expect("validated knot vector");
    (n as f64 - 1.0) * dd
}

/// Production evaluator (Cox–de Boor).
pub fn mspline_eval_stable(kv: &KnotVector, t: f64) -> f64 {
    match reflect(kv, t) {
        Some(u) => mspline_on_slice(kv.knots(), u),
        None => mspline_on_slice(kv.knots(), t),
    }
}

/// Symmetric knots give an even spline; evaluating at `|t|` makes that exact.
/// Knots themselves are left alone to keep right-continuity.
fn reflect(kv: &KnotVector, t: f64) -> Option<f64> {
    (t < 0.0 && kv.is_symmetric() && !kv.knots().contains(&t)).then_some(-t)
}

/// Cox–de Boor evaluation of the unit-mass spline on `knots`, which the
/// caller guarantees to be strictly increasing with at least two entries.
pub(crate) fn mspline_on_slice(knots: &[f64], t: f64) -> f64 {
    let n = knots.len();
    let (a, b) = (knots[0], knots[n - 1]);
    if !(a..b).contains(&t) {
        return 0.0;
    }
    // interval index mu with knots[mu] <= t < knots[mu + 1]
    let mu = knots.partition_point(|&k| k <= t) - 1;
    let intervals = n - 1;
    let mut basis = [0.0f64; MAX_SPLINE_ORDER];
    basis[mu] = 1.0;
    for r in 1..intervals {
        for i in 0..intervals - r {
            let left_den = knots[i + r] - knots[i];
            let right_den = knots[i + r + 1] - knots[i + 1];
            let left = (t - knots[i]) / left_den * basis[i];
            let right = (knots[i + r + 1] - t) / right_den * basis[i + 1];
            basis[i] = left + right;
        }
    }
    basis[0] * (n as f64 - 1.0) / (b - a)
}

/// `d/dt M(t_1, ..., t_m; t) = (m - 1) / (t_m - t_1) * (M(t_1..t_{m-1}; t) - M(t_2..t_m; t))`.
///
/// For order 3 the result is the one-sided (right) slope at the knots.
pub fn mspline_derivative(kv: &KnotVector, t: f64) -> Result<f64> {
    let m = kv.order();
    if m < 3 {
        return Err(Error::DistributionalDerivative);
    }
    let knots = kv.knots();
    let scale = (m as f64 - 1.0) / (kv.last() - kv.first());
    Ok(scale * (mspline_on_slice(&knots[..m - 1], t) - mspline_on_slice(&knots[1..], t)))
}

/// `int g(t) M(kv; t) dt`, Gauss–Legendre with `npts` points between
/// consecutive knots.
pub fn integrate_against(kv: &KnotVector, g: impl Fn(f64) -> f64, npts: usize) -> f64 {
    composite_gauss_legendre(|t| g(t) * mspline_eval_stable(kv, t), kv.knots(), npts)
}

/// `f[t_1, ..., t_n] - 1/(n-1)! * int f^{(n-1)}(t) M(t_1, ..., t_n; t) dt`.
///
/// `dfn` must be the `(n-1)`-th derivative of `f`.
pub fn hermite_genocchi_residual(
    f: impl Fn(f64) -> f64,
    dfn: impl Fn(f64) -> f64,
    kv: &KnotVector,
    npts: usize,
) -> f64 {
    let n = kv.order();
    let lhs = divided_difference(f, kv.knots()).expect("validated knot vector");
    let rhs = integrate_against(kv, dfn, npts) / factorial(n as u32 - 1);
    lhs - rhs
}
