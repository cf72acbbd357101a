//! Orbital Laplace transforms for the series B, C and D.
//!
//! For an orbit with coordinates `X` the Harish-Chandra formula gives
//!
//! ```text
//! L_X(T) = int_G exp(<T, Ad_g X>) dg = det[f(t_i x_j)] / (a_n(f) V(T^2) V(X^2))
//! ```
//!
//! where `V(S) = prod_{i<j} (s_i - s_j)`, `a_n(f) = prod_{j<n} c_{2j}` and
//! `f = f_alpha` is the even entire function with Taylor coefficients
//! `c_{2m} = 1 / (4^m m! (alpha + 1)_m)`: `sinh(z)/z` for B and C
//! (`alpha = 1/2`) and `cosh(z)` for D (`alpha = -1/2`).
//!
//! The module also carries the reductions used to restrict `L_X` to
//! `T = (t_1, ..., t_k, 0, ..., 0)`: the squared-knot divided differences
//! and their rewriting over doubled, reflected knots.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    divided_difference, factorial, pochhammer, vandermonde_of_squares, SquareMatrix,
};

/// Largest rank accepted for orbit coordinates.
pub const MAX_RANK: usize = 8;

/// Classical series: B = SO(2n+1), C = Sp(2n), D = O(2n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    B,
    C,
    D,
}

impl Series {
    pub const ALL: [Series; 3] = [Series::B, Series::C, Series::D];

    pub fn alpha(self) -> f64 {
        match self {
            Series::B | Series::C => 0.5,
            Series::D => -0.5,
        }
    }

    pub fn group_name(self, n: usize) -> String {
        match self {
            Series::B => format!("SO({})", 2 * n + 1),
            Series::C => format!("Sp({})", 2 * n),
            Series::D => format!("O({})", 2 * n),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "B" | "b" => Ok(Series::B),
            "C" | "c" => Ok(Series::C),
            "D" | "d" => Ok(Series::D),
            other => Err(Error::UnknownSeries(other.to_string())),
        }
    }
}

/// Adjoint orbit label: a series together with coordinates
/// `0 < x_1 < ... < x_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    series: Series,
    x: Vec<f64>,
}

impl OrbitSpec {
    pub fn new(series: Series, x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidOrbit(
                "at least one coordinate is required".into(),
            ));
        }
        if x.len() > MAX_RANK {
            return Err(Error::InvalidOrbit(format!(
                "rank {} exceeds the supported maximum {MAX_RANK}",
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidOrbit("coordinates must be finite".into()));
        }
        if x[0] <= 0.0 {
            return Err(Error::InvalidOrbit(
                "coordinates must be strictly positive".into(),
            ));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidOrbit(
                "coordinates must be strictly increasing".into(),
            ));
        }
        Ok(Self { series, x })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    pub fn largest(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    /// The orbit of `lambda X`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.series, self.x.iter().map(|v| v * lambda).collect())
    }
}

/// `f_alpha(z)`: `sinh(z)/z` for B/C and `cosh(z)` for D.
pub fn f_alpha(series: Series, z: f64) -> f64 {
    match series {
        Series::B | Series::C => {
            if z.abs() < 1e-4 {
                let z2 = z * z;
                1.0 + z2 / 6.0 * (1.0 + z2 / 20.0)
            } else {
                z.sinh() / z
            }
        }
        Series::D => z.cosh(),
    }
}

/// Antiderivative of [`f_alpha`] vanishing at 0: `sinh` for D and the
/// hyperbolic sine integral `Shi(z) = int_0^z sinh(s)/s ds` for B/C.
pub fn f_alpha_primitive(series: Series, z: f64) -> f64 {
    match series {
        Series::D => z.sinh(),
        Series::B | Series::C => {
            // Shi(z) = sum_m z^{2m+1} / ((2m+1) (2m+1)!), all terms share the sign of z
            let z2 = z * z;
            let mut power = z; // z^{2m+1} / (2m+1)!
            let mut sum = 0.0;
            for m in 0..500u32 {
                let odd = f64::from(2 * m + 1);
                let term = power / odd;
                sum += term;
                if term.abs() <= 1e-17 * sum.abs() {
                    break;
                }
                power *= z2 / ((odd + 1.0) * (odd + 2.0));
            }
            sum
        }
    }
}

/// Even Taylor coefficient `c_{2j} = 1 / (4^j j! (alpha + 1)_j)` of `f_alpha`.
pub fn taylor_coeff(series: Series, j: u32) -> f64 {
    1.0 / (4f64.powi(j as i32) * factorial(j) * pochhammer(series.alpha() + 1.0, j))
}

/// `a_m(f) = prod_{j=0}^{m-1} c_{2j}`, with `a_0 = 1`.
pub fn a_coeff(series: Series, m: u32) -> f64 {
    (0..m).map(|j| taylor_coeff(series, j)).product()
}

/// `1 / a_n(f)`: `(2n-1)! (2n-3)! ... 1!` for B/C, `(2n-2)! ... 2! 0!` for D.
pub fn harish_chandra_prefactor(series: Series, n: usize) -> f64 {
    (0..n as u32)
        .map(|j| match series {
            Series::B | Series::C => factorial(2 * j + 1),
            Series::D => factorial(2 * j),
        })
        .product()
}

fn check_generic(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateEvaluationPoint);
    }
    let mut abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    if abs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateEvaluationPoint);
    }
    Ok(())
}

/// `det[f_alpha(t_i x_j)] / (V(T^2) V(X^2))`.
pub fn dn_ratio(series: Series, t: &[f64], x: &[f64]) -> Result<f64> {
    if t.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: t.len(),
        });
    }
    if t.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    check_generic(t)?;
    check_generic(x)?;
    let m = SquareMatrix::from_fn(t.len(), |i, j| f_alpha(series, t[i] * x[j]));
    Ok(m.determinant() / (vandermonde_of_squares(t) * vandermonde_of_squares(x)))
}

/// Harish-Chandra closed form of the orbital Laplace transform `L_X(T)`.
///
/// `T` must have pairwise distinct `|t_i|`; it is normalised so that
/// `L_X(0) = 1`.
pub fn orbital_laplace(spec: &OrbitSpec, t: &[f64]) -> Result<f64> {
    if t.len() != spec.rank() {
        return Err(Error::DimensionMismatch {
            expected: spec.rank(),
            got: t.len(),
        });
    }
    let ratio = dn_ratio(spec.series(), t, spec.coords())?;
    Ok(harish_chandra_prefactor(spec.series(), spec.rank()) * ratio)
}

/// `g[-z_m, ..., -z_1, z_1, ..., z_m]` for `g(z) = z f(z)`.
///
/// For even `f` this equals `phi[z_1^2, ..., z_m^2]` with `phi(y) = f(sqrt y)`;
/// for general `f` it picks up the even part of `f` only.
pub fn lemma2_doubled(f: impl Fn(f64) -> f64, z: &[f64]) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::TooFewKnots { min: 1, got: 0 });
    }
    if z[0] <= 0.0 {
        return Err(Error::ReflectedKnotCollision);
    }
    if z.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::CoincidentKnots);
    }
    if z.iter().any(|v| !v.is_finite()) || z.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::KnotsNotIncreasing);
    }
    let knots: Vec<f64> = z
        .iter()
        .rev()
        .map(|v| -v)
        .chain(z.iter().copied())
        .collect();
    divided_difference(|s| s * f(s), &knots)
}

/// `phi[y_0, ..., y_d]` for `phi(y) = f_alpha(t sqrt y)` and distinct `y_i >= 0`.
///
/// Summed from the Taylor series `sum_j c_{2j} t^{2j} h_{j-d}(y)`, where `h`
/// is the complete homogeneous symmetric polynomial. Every term is
/// nonnegative, so there is no cancellation even when `t` is tiny.
pub fn f_alpha_squares_dd(series: Series, t: f64, y: &[f64]) -> f64 {
    let d = y.len() - 1;
    let alpha = series.alpha();
    let t2 = t * t;
    let mut coef = taylor_coeff(series, d as u32) * t2.powi(d as i32);
    let mut h = vec![1.0; y.len()];
    let mut sum = 0.0;
    for m in 0..4000u32 {
        let term = coef * h[d];
        sum += term;
        if m > 2 && term <= 1e-18 * sum {
            break;
        }
        let j = f64::from(d as u32 + m);
        coef *= t2 / (4.0 * (j + 1.0) * (alpha + 1.0 + j));
        let mut prev = 0.0;
        for (hi, &yi) in h.iter_mut().zip(y) {
            prev += yi * *hi;
            *hi = prev;
        }
    }
    sum
}

/// `D_n(f; t_1, ..., t_k, 0, ..., 0; X)` in reduced divided-difference form:
///
/// ```text
/// sigma * a_{n-k}(f) / (V_n(X^2) V_k(T^2) (t_1...t_k)^{2(n-k)})
///       * prod_{1 <= j-i <= n-k} (x_j^2 - x_i^2)
///       * det[ phi_i[x_j^2, ..., x_{j+n-k}^2] ]_{i,j=1..k}
/// ```
///
/// with `phi_i(y) = f(t_i sqrt y)` evaluated through doubled knots. The sign
/// `sigma = (-1)^{k(n-k) + (n-k)(n-k-1)/2}` matches the limit of
/// [`dn_ratio`] when the trailing `n - k` coordinates of `T` go to zero in
/// increasing order.
pub fn lemma1_reduced(spec: &OrbitSpec, tk: &[f64]) -> Result<f64> {
    let n = spec.rank();
    let k = tk.len();
    if k == 0 || k >= n {
        return Err(Error::ProjectionIndex { n, k });
    }
    if tk.contains(&0.0) {
        return Err(Error::DegenerateEvaluationPoint);
    }
    check_generic(tk)?;
    let series = spec.series();
    let x = spec.coords();
    let d = n - k;

    let mut band = 1.0;
    for i in 0..n {
        for j in i + 1..=(i + d).min(n - 1) {
            band *= x[j] * x[j] - x[i] * x[i];
        }
    }
    let squares: Vec<f64> = x.iter().map(|v| v * v).collect();
    let mut entries = Vec::with_capacity(k * k);
    for &ti in tk {
        for j in 0..k {
            entries.push(f_alpha_squares_dd(series, ti, &squares[j..=j + d]));
        }
    }
    let det = SquareMatrix::from_fn(k, |i, j| entries[i * k + j]).determinant();
    let tprod: f64 = tk.iter().product();
    let prefix = a_coeff(series, d as u32)
        / (vandermonde_of_squares(x) * vandermonde_of_squares(tk) * tprod.powi(2 * d as i32));
    let exponent = k * d + d * (d.saturating_sub(1)) / 2;
    let sign = if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(sign * prefix * band * det)
}

/// `L_X(t_1, ..., t_k, 0, ..., 0)`, the Laplace transform of the projected
/// orbital measure evaluated on the rank-`k` corner.
pub fn restricted_orbital_laplace(spec: &OrbitSpec, tk: &[f64]) -> Result<f64> {
    Ok(harish_chandra_prefactor(spec.series(), spec.rank()) * lemma1_reduced(spec, tk)?)
}

/// Richardson-extrapolated `lim_{eps -> 0} dn_ratio(T_eps, X)` with
/// `T_eps = (t_1, ..., t_k, eps, 2 eps, ..., (n-k) eps)`, using `eps` and
/// `eps / 10`. The error of each evaluation is even in `eps`, so one
/// extrapolation step removes the `eps^2` term.
pub fn padded_dn_limit(series: Series, tk: &[f64], x: &[f64], eps: f64) -> Result<f64> {
    let eval = |e: f64| {
        let t: Vec<f64> = tk
            .iter()
            .copied()
            .chain((1..=x.len() - tk.len()).map(|i| e * i as f64))
            .collect();
        dn_ratio(series, &t, x)
    };
    let coarse = eval(eps)?;
    let fine = eval(eps / 10.0)?;
    Ok((100.0 * fine - coarse) / 99.0)
}
