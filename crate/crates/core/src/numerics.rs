//! Scalar and small-matrix primitives shared by the rest of the crate:
//! divided differences, combinatorial constants, dense determinants and
//! Gauss–Legendre quadrature (single interval, composite and tensor-product).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Divided difference `f[t_1, ..., t_n]` of `f` over pairwise distinct knots.
///
/// Evaluated with the triangular Newton table
///
/// ```text
/// f[t_i]            = f(t_i)
/// f[t_i, ..., t_j]  = (f[t_{i+1}, ..., t_j] - f[t_i, ..., t_{j-1}]) / (t_j - t_i)
/// ```
///
/// A single knot returns `f(t_1)`. The result is symmetric in the knot order.
pub fn divided_difference<F>(f: F, knots: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if knots.is_empty() {
        return Err(Error::TooFewKnots { min: 1, got: 0 });
    }
    ensure_distinct(knots)?;
    let mut table: Vec<f64> = knots.iter().map(|&t| f(t)).collect();
    let n = knots.len();
    for level in 1..n {
        for i in 0..n - level {
            table[i] = (table[i + 1] - table[i]) / (knots[i + level] - knots[i]);
        }
    }
    Ok(table[0])
}

fn ensure_distinct(knots: &[f64]) -> Result<()> {
    if knots.iter().any(|t| !t.is_finite()) {
        return Err(Error::KnotsNotIncreasing);
    }
    let mut sorted = knots.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::CoincidentKnots);
    }
    Ok(())
}

/// Rising factorial `(a)_m = a (a + 1) ... (a + m - 1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, m: u32) -> f64 {
    (0..m).map(|i| a + f64::from(i)).product()
}

/// `m!!`, with `0!! = 1`.
pub fn double_factorial(m: u32) -> u128 {
    let mut acc: u128 = 1;
    let mut i = m;
    while i > 1 {
        acc *= u128::from(i);
        i -= 2;
    }
    acc
}

/// `(2m - 1)!!` with the convention `(-1)!! = 1`.
pub fn odd_double_factorial(m: u32) -> u128 {
    if m == 0 {
        1
    } else {
        double_factorial(2 * m - 1)
    }
}

pub fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// Binomial coefficient `C(a, b)`; zero when `b > a`.
pub fn binomial(a: u32, b: u32) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // exact at every step: acc * (a - i) is divisible by (i + 1)
        acc = acc * u128::from(a - i) / u128::from(i + 1);
    }
    acc
}

/// `prod_{i<j} (s_i - s_j)`.
pub fn vandermonde(values: &[f64]) -> f64 {
    let mut acc = 1.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            acc *= a - b;
        }
    }
    acc
}

/// Vandermonde of the squares, `prod_{i<j} (s_i^2 - s_j^2)`.
pub fn vandermonde_of_squares(values: &[f64]) -> f64 {
    let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
    vandermonde(&squares)
}

/// Dense square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    /// Builds an `order x order` matrix from `entry(row, col)`.
    pub fn from_fn<F>(order: usize, mut entry: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        assert!(order >= 1, "matrix order must be positive");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(entry(i, j));
            }
        }
        Self { order, entries }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let order = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == order),
            "rows must form a square matrix"
        );
        Self::from_fn(order, |i, j| rows[i][j])
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.order + col]
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, other.order);
        let n = self.order;
        Self::from_fn(n, |i, j| {
            (0..n).map(|l| self.get(i, l) * other.get(l, j)).sum()
        })
    }

    /// Determinant by LU factorisation with partial pivoting. Singular
    /// matrices return exactly zero.
    pub fn determinant(&self) -> f64 {
        let n = self.order;
        match n {
            1 => return self.entries[0],
            2 => return self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            _ => {}
        }
        let mut a = self.entries.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor != 0.0 {
                    for j in col + 1..n {
                        a[row * n + j] -= factor * a[col * n + j];
                    }
                }
            }
        }
        det
    }
}

pub fn determinant(m: &SquareMatrix) -> f64 {
    m.determinant()
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `npts`-point rule by Newton iteration on `P_npts`.
    pub fn new(npts: usize) -> Self {
        assert!(npts >= 1, "quadrature needs at least one point");
        let n = npts;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared rule for `npts`, computed once per process.
    pub fn cached(npts: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(npts)
            .or_insert_with(|| Arc::new(GaussLegendre::new(npts)))
            .clone()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Nodes and weights of the rule mapped to `[a, b]`, appended to `out`.
    fn push_mapped(&self, a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            nodes.push(mid + half * x);
            weights.push(w * half);
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `npts`-point Gauss–Legendre estimate of `int_a^b f`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, npts: usize) -> f64 {
    GaussLegendre::cached(npts).integrate(f, a, b)
}

/// Composite Gauss–Legendre over consecutive breakpoints, `npts` per cell.
pub fn composite_gauss_legendre<F: Fn(f64) -> f64>(f: F, breaks: &[f64], npts: usize) -> f64 {
    let rule = GaussLegendre::cached(npts);
    breaks
        .windows(2)
        .map(|w| rule.integrate(&f, w[0], w[1]))
        .sum()
}

/// Tensor-product Gauss–Legendre over the box `prod [a_i, b_i]`.
pub fn cube_integrate<F>(f: F, bounds: &[(f64, f64)], npts_per_axis: usize) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let breaks: Vec<Vec<f64>> = bounds.iter().map(|&(a, b)| vec![a, b]).collect();
    cube_integrate_cells(f, &breaks, npts_per_axis)
}

/// Tensor product of composite rules: axis `i` is split at `breaks[i]` and
/// each cell receives `npts_per_cell` Gauss points.
pub fn cube_integrate_cells<F>(f: F, breaks: &[Vec<f64>], npts_per_cell: usize) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    assert!(!breaks.is_empty(), "need at least one axis");
    let rule = GaussLegendre::cached(npts_per_cell);
    let axes: Vec<(Vec<f64>, Vec<f64>)> = breaks
        .iter()
        .map(|b| {
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for w in b.windows(2) {
                rule.push_mapped(w[0], w[1], &mut nodes, &mut weights);
            }
            (nodes, weights)
        })
        .collect();
    let dim = axes.len();
    if axes.iter().any(|(n, _)| n.is_empty()) {
        return 0.0;
    }
    let mut index = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for (axis, &i) in index.iter().enumerate() {
            point[axis] = axes[axis].0[i];
            weight *= axes[axis].1[i];
        }
        total += weight * f(&point);

        let mut axis = 0;
        loop {
            index[axis] += 1;
            if index[axis] < axes[axis].0.len() {
                break;
            }
            index[axis] = 0;
            axis += 1;
            if axis == dim {
                return total;
            }
        }
    }
}
