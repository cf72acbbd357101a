//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the library's numerics.
#![allow(dead_code)]

use orbital_radial::Series;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    /// Points and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn composite(&self, f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
        breaks
            .windows(2)
            .map(|w| self.integrate(&f, w[0], w[1]))
            .sum()
    }
}

/// Tensor-product integral over the cells of `breaks^k`; axis `a` uses `rules[a]`.
pub fn cube_integral(f: impl Fn(&[f64]) -> f64, breaks: &[f64], rules: &[Rule]) -> f64 {
    let k = rules.len();
    let axis_points: Vec<Vec<(f64, f64)>> = rules
        .iter()
        .map(|r| {
            breaks
                .windows(2)
                .flat_map(|w| r.mapped(w[0], w[1]).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; k];
    let mut y = vec![0.0; k];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for a in 0..k {
            let (p, wa) = axis_points[a][idx[a]];
            y[a] = p;
            w *= wa;
        }
        total += w * f(&y);
        let mut a = 0;
        loop {
            if a == k {
                return total;
            }
            idx[a] += 1;
            if idx[a] < axis_points[a].len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// `f[t_1, ..., t_n] = sum_i f(t_i) / prod_{j != i} (t_i - t_j)`.
pub fn lagrange_dd(f: impl Fn(f64) -> f64, t: &[f64]) -> f64 {
    (0..t.len())
        .map(|i| {
            let w: f64 = (0..t.len())
                .filter(|&j| j != i)
                .map(|j| t[i] - t[j])
                .product();
            f(t[i]) / w
        })
        .sum()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let m = a[r][c] / a[c][c];
            let pivot_row = a[c].clone();
            for (x, p) in a[r][c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= m * p;
            }
        }
    }
    d
}

/// Curry–Schoenberg recursion for the unit-mass B-spline, right-continuous.
pub fn bspline(t: &[f64], x: f64) -> f64 {
    let n = t.len();
    if n == 2 {
        return if t[0] <= x && x < t[1] {
            1.0 / (t[1] - t[0])
        } else {
            0.0
        };
    }
    let k = (n - 1) as f64;
    let left = (x - t[0]) * bspline(&t[..n - 1], x);
    let right = (t[n - 1] - x) * bspline(&t[1..], x);
    k * (left + right) / ((k - 1.0) * (t[n - 1] - t[0]))
}

pub fn f_alpha(series: Series, z: f64) -> f64 {
    match series {
        Series::D => z.cosh(),
        _ if z.abs() < 1e-4 => 1.0 + z * z / 6.0,
        _ => z.sinh() / z,
    }
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// `prod_{j<k} (2j+1)!` for B and C, `prod_{j<k} (2j)!` for D.
pub fn hc_prefactor(series: Series, k: usize) -> f64 {
    let shift = if series == Series::D { 0 } else { 1 };
    (0..k as u32).map(|j| factorial(2 * j + shift)).product()
}

fn vand_sq(s: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            v *= s[i] * s[i] - s[j] * s[j];
        }
    }
    v
}

/// `det[f(t_i x_j)] / (V(T^2) V(X^2))`.
pub fn dn_ratio(series: Series, t: &[f64], x: &[f64]) -> f64 {
    let m = t
        .iter()
        .map(|&ti| x.iter().map(|&xj| f_alpha(series, ti * xj)).collect())
        .collect();
    det(m) / (vand_sq(t) * vand_sq(x))
}

/// Harish-Chandra orbital Laplace transform for generic `t`.
pub fn orbital_laplace(series: Series, t: &[f64], x: &[f64]) -> f64 {
    hc_prefactor(series, x.len()) * dn_ratio(series, t, x)
}

/// `lim dn_ratio(t_1, ..., t_k, eps, 2 eps, ...)` by one Richardson step
/// between `eps = 1e-3` and `1e-4`.
pub fn padded_limit(series: Series, tk: &[f64], x: &[f64]) -> f64 {
    let at = |e: f64| {
        let t: Vec<f64> = tk
            .iter()
            .copied()
            .chain((1..=x.len() - tk.len()).map(|i| e * i as f64))
            .collect();
        dn_ratio(series, &t, x)
    };
    (100.0 * at(1e-4) - at(1e-3)) / 99.0
}

/// CDF of a one-dimensional density that is polynomial between `breaks`.
pub struct PiecewiseCdf<F> {
    density: F,
    breaks: Vec<f64>,
    cumulative: Vec<f64>,
    rule: Rule,
}

impl<F: Fn(f64) -> f64> PiecewiseCdf<F> {
    pub fn new(density: F, breaks: Vec<f64>, npts: usize) -> Self {
        let rule = Rule::new(npts);
        let mut cumulative = vec![0.0];
        for w in breaks.windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + rule.integrate(&density, w[0], w[1]));
        }
        Self {
            density,
            breaks,
            cumulative,
            rule,
        }
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y <= self.breaks[0] {
            return 0.0;
        }
        if y >= *self.breaks.last().unwrap() {
            return self.total();
        }
        let cell = self.breaks.partition_point(|&b| b <= y) - 1;
        self.cumulative[cell] + self.rule.integrate(&self.density, self.breaks[cell], y)
    }
}

/// `sup |F_N - F|` for sorted samples.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &y) in sorted.iter().enumerate() {
        let f = cdf(y);
        worst = worst.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    worst
}
