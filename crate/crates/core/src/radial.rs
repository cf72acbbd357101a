//! Radial part `nu_{X,k}` of the corner projection of an orbital measure.
//!
//! For `1 <= k < n` and `d = n - k`, the projected measure mixes rank-`k`
//! orbital measures with the density
//!
//! ```text
//! rho(Y) = 2^k c(n,k) / prod_{j-i >= d+1} (x_j^2 - x_i^2)
//!          * det[ (-y d/dy + kappa) M(-x_{j+d}, ..., -x_j, x_j, ..., x_{j+d}; y_i) ]_{i,j=1..k}
//!          * prod_{i<j} (y_j^2 - y_i^2)
//! ```
//!
//! with respect to Lebesgue measure on the chamber `0 <= y_1 <= ... <= y_k`.
//! The constant `c(n,k)` normalises the same expression over signed
//! coordinates; restricting to `y_i >= 0` folds `2^k` sign patterns onto the
//! chamber, hence the leading `2^k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplace::{
    f_alpha, harish_chandra_prefactor, restricted_orbital_laplace, OrbitSpec, Series,
};
use crate::numerics::{
    binomial, composite_gauss_legendre, cube_integrate_cells, double_factorial, factorial,
    odd_double_factorial, vandermonde_of_squares, SquareMatrix,
};
use crate::splines::{mspline_derivative, mspline_eval_stable, symmetric_knots, KnotVector};

/// Largest `n - k` for which the spline windows stay within the supported order.
pub const MAX_CODIMENSION: usize = 8;

/// Constants `kappa(n,k)` and `c(n,k)` of the density formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    pub series: Series,
    pub n: usize,
    pub k: usize,
    pub kappa: f64,
    pub c: f64,
}

/// `kappa = 0`, `c = (2n-2k)!!/(2n)!! prod_{i<k} C(2n-2k+2i+2, 2i+1)` for B/C;
/// `kappa = 2(n-k)`, `c = (2n-2k-1)!!/(2n-1)!! prod_{i<k} C(2n-2k+2i+1, 2i)` for D.
pub fn make_params(series: Series, n: usize, k: usize) -> Result<SeriesParams> {
    if k == 0 || k >= n {
        return Err(Error::ProjectionIndex { n, k });
    }
    let (n32, k32) = (n as u32, k as u32);
    let d = n32 - k32;
    let (kappa, c) = match series {
        Series::B | Series::C => {
            let ratio = double_factorial(2 * d) as f64 / double_factorial(2 * n32) as f64;
            let prod: f64 = (0..k32)
                .map(|i| binomial(2 * d + 2 * i + 2, 2 * i + 1) as f64)
                .product();
            (0.0, ratio * prod)
        }
        Series::D => {
            let ratio = odd_double_factorial(d) as f64 / odd_double_factorial(n32) as f64;
            let prod: f64 = (0..k32)
                .map(|i| binomial(2 * d + 2 * i + 1, 2 * i) as f64)
                .product();
            (2.0 * f64::from(d), ratio * prod)
        }
    };
    Ok(SeriesParams {
        series,
        n,
        k,
        kappa,
        c,
    })
}

/// `(-y d/dy + kappa) M(kv; y)`.
pub fn delta_m(kv: &KnotVector, y: f64, kappa: f64) -> Result<f64> {
    let slope = mspline_derivative(kv, y)?;
    Ok(-y * slope + kappa * mspline_eval_stable(kv, y))
}

/// Precomputed density of `nu_{X,k}`.
#[derive(Clone, Debug)]
pub struct RadialDensity {
    spec: OrbitSpec,
    k: usize,
    params: SeriesParams,
    windows: Vec<KnotVector>,
    denom: f64,
}

impl RadialDensity {
    pub fn new(spec: OrbitSpec, k: usize) -> Result<Self> {
        let n = spec.rank();
        let params = make_params(spec.series(), n, k)?;
        let d = n - k;
        if d > MAX_CODIMENSION {
            return Err(Error::OrderTooLarge {
                order: 2 * d + 2,
                max: 2 * MAX_CODIMENSION + 2,
            });
        }
        let x = spec.coords();
        let windows = (0..k)
            .map(|j| symmetric_knots(x, j, d))
            .collect::<Result<Vec<_>>>()?;
        let mut denom = 1.0;
        for i in 0..n {
            for j in i + d + 1..n {
                denom *= x[j] * x[j] - x[i] * x[i];
            }
        }
        Ok(Self {
            spec,
            k,
            params,
            windows,
            denom,
        })
    }

    pub fn spec(&self) -> &OrbitSpec {
        &self.spec
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn params(&self) -> &SeriesParams {
        &self.params
    }

    /// Symmetric knot windows `(+-x)|_j^{j+n-k}`, `j = 1..k`.
    pub fn windows(&self) -> &[KnotVector] {
        &self.windows
    }

    /// `prod_{j-i >= n-k+1} (x_j^2 - x_i^2)`.
    pub fn denom(&self) -> f64 {
        self.denom
    }

    /// `[0, x_n]^k`.
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        vec![(0.0, self.spec.largest()); self.k]
    }

    /// Breakpoints `0, x_1, ..., x_n` of the piecewise-polynomial density along each axis.
    pub fn breakpoints(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(self.spec.coords().iter().copied())
            .collect()
    }

    fn prefactor(&self) -> f64 {
        2f64.powi(self.k as i32) * self.params.c / self.denom
    }

    fn sorted_in_chamber(&self, y: &[f64]) -> Result<Option<Vec<f64>>> {
        if y.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut sorted = y.to_vec();
        sorted.sort_by(f64::total_cmp);
        if sorted[0] < 0.0 || sorted[self.k - 1] >= self.spec.largest() {
            return Ok(None);
        }
        Ok(Some(sorted))
    }

    fn delta_matrix_det(&self, y: &[f64]) -> f64 {
        let kappa = self.params.kappa;
        let k = self.k;
        let m = SquareMatrix::from_fn(k, |i, j| {
            // window order is 2(n-k)+2 >= 4, so the derivative is classical
            delta_m(&self.windows[j], y[i], kappa).expect("window order >= 4")
        });
        m.determinant()
    }

    /// Density with respect to `dy_1 ... dy_k` on the chamber. Unordered input
    /// is sorted first; points with a negative entry or an entry `>= x_n`
    /// evaluate to zero.
    pub fn density(&self, y: &[f64]) -> Result<f64> {
        let Some(y) = self.sorted_in_chamber(y)? else {
            return Ok(0.0);
        };
        let mut vand = 1.0;
        for i in 0..self.k {
            for j in i + 1..self.k {
                vand *= y[j] * y[j] - y[i] * y[i];
            }
        }
        Ok(self.prefactor() * self.delta_matrix_det(&y) * vand)
    }

    /// Density with respect to `v_k(dY) = prod_{i<j} (y_j^2 - y_i^2) dY`.
    pub fn density_wrt_vk(&self, y: &[f64]) -> Result<f64> {
        let Some(y) = self.sorted_in_chamber(y)? else {
            return Ok(0.0);
        };
        Ok(self.prefactor() * self.delta_matrix_det(&y))
    }

    /// Total mass over the chamber, integrating the symmetric extension over
    /// `[0, x_n]^k` and dividing by `k!`. The density is a polynomial on each
    /// cell between consecutive breakpoints, so `npts_per_cell` Gauss points
    /// integrate it exactly once `npts_per_cell` exceeds half its degree.
    pub fn normalization(&self, npts_per_cell: usize) -> f64 {
        let breaks = vec![self.breakpoints(); self.k];
        let total =
            cube_integrate_cells(|y| self.density(y).unwrap_or(0.0), &breaks, npts_per_cell);
        total / factorial(self.k as u32)
    }

    /// Marginal CDF `nu([0, y])`, available for `k = 1`.
    pub fn cdf(&self, y: f64) -> Result<f64> {
        if self.k != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.k,
            });
        }
        if y <= 0.0 {
            return Ok(0.0);
        }
        let top = self.spec.largest();
        if y >= top {
            return Ok(1.0);
        }
        let mut breaks: Vec<f64> = self.breakpoints().into_iter().filter(|&b| b < y).collect();
        breaks.push(y);
        let npts = self.params.n + 1;
        let value = composite_gauss_legendre(|t| self.density(&[t]).unwrap_or(0.0), &breaks, npts);
        Ok(value.clamp(0.0, 1.0))
    }

    /// `rho(Y) * L_Y(T)` with `L_Y` the rank-`k` orbital Laplace transform.
    /// The Vandermonde of `Y^2` cancels analytically, so the product stays
    /// finite on the chamber walls where `L_Y` alone is singular.
    pub fn laplace_weighted_density(&self, y: &[f64], tk: &[f64]) -> Result<f64> {
        if tk.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: tk.len(),
            });
        }
        let Some(y) = self.sorted_in_chamber(y)? else {
            return Ok(0.0);
        };
        let k = self.k;
        let series = self.spec.series();
        let fmat = SquareMatrix::from_fn(k, |i, j| f_alpha(series, tk[i] * y[j]));
        let sign = if (k * (k - 1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let laplace_part =
            harish_chandra_prefactor(series, k) * fmat.determinant() / vandermonde_of_squares(tk);
        Ok(self.prefactor() * self.delta_matrix_det(&y) * sign * laplace_part)
    }

    /// `| L_X(T_k, 0, ..., 0) - int L_Y(T_k) nu_{X,k}(dY) |`.
    pub fn projection_identity_residual(&self, tk: &[f64], npts_per_cell: usize) -> Result<f64> {
        let lhs = restricted_orbital_laplace(&self.spec, tk)?;
        let rhs = self.mixture_laplace(tk, npts_per_cell)?;
        Ok((lhs - rhs).abs())
    }

    /// `int L_Y(T_k) nu_{X,k}(dY)` by symmetrised tensor quadrature.
    pub fn mixture_laplace(&self, tk: &[f64], npts_per_cell: usize) -> Result<f64> {
        if tk.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: tk.len(),
            });
        }
        if tk.contains(&0.0) {
            return Err(Error::DegenerateEvaluationPoint);
        }
        let mut abs: Vec<f64> = tk.iter().map(|t| t.abs()).collect();
        abs.sort_by(f64::total_cmp);
        if abs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateEvaluationPoint);
        }
        let breaks = vec![self.breakpoints(); self.k];
        let total = cube_integrate_cells(
            |y| self.laplace_weighted_density(y, tk).unwrap_or(0.0),
            &breaks,
            npts_per_cell,
        );
        Ok(total / factorial(self.k as u32))
    }
}

pub fn density_eval(rd: &RadialDensity, y: &[f64]) -> Result<f64> {
    rd.density(y)
}

pub fn support_box(rd: &RadialDensity) -> Vec<(f64, f64)> {
    rd.support_box()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rd(series: Series, x: &[f64], k: usize) -> RadialDensity {
        RadialDensity::new(OrbitSpec::new(series, x.to_vec()).unwrap(), k).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = make_params(Series::B, 2, 1).unwrap();
        assert_eq!(p.kappa, 0.0);
        assert_relative_eq!(p.c, 1.0);
        let p = make_params(Series::D, 2, 1).unwrap();
        assert_eq!(p.kappa, 2.0);
        assert_relative_eq!(p.c, 1.0 / 3.0);
        let p = make_params(Series::C, 3, 1).unwrap();
        assert_eq!(p.kappa, 0.0);
        assert_relative_eq!(p.c, 1.0);
        let err = make_params(Series::B, 2, 2).unwrap_err();
        assert_eq!(
            err.to_string(),
            "projection index must satisfy k < n (got k = 2, n = 2)"
        );
        assert!(make_params(Series::B, 2, 0).is_err());
    }

    #[test]
    fn delta_m_examples() {
        let kv = symmetric_knots(&[1.0, 2.0], 0, 1).unwrap();
        assert_eq!(delta_m(&kv, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(delta_m(&kv, 2.5, 0.0).unwrap(), 0.0);
        assert_eq!(delta_m(&kv, 2.5, 3.0).unwrap(), 0.0);
        assert_relative_eq!(delta_m(&kv, 1.5, 0.0).unwrap(), 0.375, epsilon = 1e-15);
        // cross-check with finite differences of the spline
        let h = 1e-6;
        let fd =
            (mspline_eval_stable(&kv, 1.5 + h) - mspline_eval_stable(&kv, 1.5 - h)) / (2.0 * h);
        assert_relative_eq!(-1.5 * fd, 0.375, epsilon = 1e-8);
    }

    #[test]
    fn density_examples() {
        let b = rd(Series::B, &[1.0, 2.0], 1);
        assert_eq!(b.density(&[2.5]).unwrap(), 0.0);
        assert_eq!(b.density(&[-0.1]).unwrap(), 0.0);
        // 2^k c / denom * (-y M'(y)) = 2 * 0.375
        assert_relative_eq!(b.density(&[1.5]).unwrap(), 0.75, epsilon = 1e-14);
        assert_relative_eq!(b.normalization(8), 1.0, epsilon = 1e-12);
        assert_eq!(b.support_box(), vec![(0.0, 2.0)]);
        let c = rd(Series::C, &[1.0, 2.0, 3.0], 2);
        assert_eq!(c.support_box(), vec![(0.0, 3.0), (0.0, 3.0)]);
        assert!(matches!(
            c.density(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(c.density(&[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn density_is_symmetric_in_input_order() {
        let r = rd(Series::D, &[0.6, 1.3, 2.0, 2.4], 3);
        let a = r.density(&[0.3, 1.1, 1.9]).unwrap();
        let b = r.density(&[1.9, 0.3, 1.1]).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0);
    }

    #[test]
    fn normalization_examples() {
        assert!((rd(Series::B, &[1.0, 2.0], 1).normalization(64) - 1.0).abs() < 1e-6);
        assert!((rd(Series::D, &[1.0, 2.0], 1).normalization(64) - 1.0).abs() < 1e-6);
        assert!((rd(Series::C, &[1.0, 2.0, 3.0], 2).normalization(12) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn cdf_is_monotone_onto_unit_interval() {
        for s in Series::ALL {
            let r = rd(s, &[1.0, 2.0, 3.0], 1);
            let mut prev = 0.0;
            for i in 0..=60 {
                let y = 3.0 * f64::from(i) / 60.0;
                let v = r.cdf(y).unwrap();
                assert!(v >= prev - 1e-14);
                prev = v;
            }
            assert_eq!(r.cdf(3.0).unwrap(), 1.0);
            assert!((r.cdf(2.999_999).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!(rd(Series::B, &[1.0, 2.0, 3.0], 2).cdf(1.0).is_err());
    }

    #[test]
    fn projection_identity_examples() {
        let b = rd(Series::B, &[1.0, 2.0], 1);
        assert!(b.projection_identity_residual(&[0.5], 16).unwrap() <= 1e-5);
        let d = rd(Series::D, &[1.0, 2.0], 1);
        assert!(d.projection_identity_residual(&[0.5], 16).unwrap() <= 1e-5);
        let b3 = rd(Series::B, &[1.0, 2.0, 3.0], 2);
        assert!(b3.projection_identity_residual(&[0.4, 0.9], 12).unwrap() <= 1e-3);
    }

    #[test]
    fn windows_and_denominator() {
        let r = rd(Series::B, &[1.0, 2.0, 3.0, 4.0], 2);
        assert_eq!(r.windows().len(), 2);
        assert_eq!(r.windows()[1].knots(), &[-4.0, -3.0, -2.0, 2.0, 3.0, 4.0]);
        // pairs with j - i >= 3: (1, 4)
        assert_relative_eq!(r.denom(), 15.0);
    }
}
