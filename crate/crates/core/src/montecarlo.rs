//! Monte Carlo oracle: Haar-random conjugation of canonical-form matrices,
//! corner projection and spectral extraction.
//!
//! Series B and D are represented by real antisymmetric matrices of size
//! `2n+1` and `2n`; series C by complex `2n x 2n` anti-Hermitian matrices
//! `A` with `A J = J conj(A)`, `J = [[0, I], [-I, 0]]`. The rank-`k`
//! subalgebra is the top-left corner (B, D) or the index set
//! `{1..k} u {n+1..n+k}` (C).
//!
//! Draws are split into fixed-size chunks, each driven by its own ChaCha
//! stream derived from the batch seed, so results do not depend on the
//! number of worker threads.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplace::{OrbitSpec, Series};

pub type Complex64 = Complex<f64>;

const CHUNK: usize = 1024;
const STRUCTURE_TOL: f64 = 1e-8;
const PAIRING_TOL: f64 = 1e-9;

/// Element of one of the Lie algebras, or of the corresponding group.
#[derive(Clone, Debug, PartialEq)]
pub enum LieMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl LieMatrix {
    pub fn size(&self) -> usize {
        match self {
            LieMatrix::Real(m) => m.nrows(),
            LieMatrix::Complex(m) => m.nrows(),
        }
    }

    fn to_complex(&self) -> DMatrix<Complex64> {
        match self {
            LieMatrix::Real(m) => m.map(|v| Complex64::new(v, 0.0)),
            LieMatrix::Complex(m) => m.clone(),
        }
    }
}

/// Which principal block realises the rank-`k` subalgebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CornerPosition {
    #[default]
    TopLeft,
    BottomRight,
}

/// Matrix size of the defining representation.
pub fn matrix_size(series: Series, n: usize) -> usize {
    match series {
        Series::B => 2 * n + 1,
        Series::C | Series::D => 2 * n,
    }
}

/// Canonical form with coordinates `x`: 2x2 blocks `[[0, x_j], [-x_j, 0]]`
/// (B, D; B has a trailing zero) or `diag(i x, -i x)` (C).
pub fn canonical_from_coords(series: Series, x: &[f64]) -> LieMatrix {
    let n = x.len();
    match series {
        Series::B | Series::D => {
            let m = matrix_size(series, n);
            let mut a = DMatrix::zeros(m, m);
            for (j, &v) in x.iter().enumerate() {
                a[(2 * j, 2 * j + 1)] = v;
                a[(2 * j + 1, 2 * j)] = -v;
            }
            LieMatrix::Real(a)
        }
        Series::C => {
            let mut a = DMatrix::zeros(2 * n, 2 * n);
            for (j, &v) in x.iter().enumerate() {
                a[(j, j)] = Complex64::new(0.0, v);
                a[(n + j, n + j)] = Complex64::new(0.0, -v);
            }
            LieMatrix::Complex(a)
        }
    }
}

pub fn canonical_matrix(spec: &OrbitSpec) -> LieMatrix {
    canonical_from_coords(spec.series(), spec.coords())
}

fn gaussian_matrix<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed element of `O(m)`: QR of a Gaussian matrix with the
/// signs of `diag(R)` moved into `Q`.
pub fn haar_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    let qr = gaussian_matrix(m, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar-distributed element of `SO(m)`.
pub fn haar_special_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    let mut q = haar_orthogonal(m, rng);
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed element of the compact symplectic group, as a complex
/// `2n x 2n` unitary with `Q^T J Q = J`.
///
/// Columns `j` and `n + j` form the quaternionic pair `(v, -J conj v)`.
/// Gram–Schmidt over quaternionic lines of a quaternionic Gaussian matrix is
/// the quaternionic QR with positive real diagonal, which makes `Q` Haar.
pub fn haar_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let m = 2 * n;
    let mut q = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..m).map(|_| complex_gaussian(rng)).collect();
        // two passes of modified Gram-Schmidt against the previous quaternionic lines
        for _ in 0..2 {
            for i in 0..j {
                for col in [i, n + i] {
                    let proj: Complex64 = (0..m).map(|r| q[(r, col)].conj() * v[r]).sum();
                    for (r, vr) in v.iter_mut().enumerate() {
                        *vr -= q[(r, col)] * proj;
                    }
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for r in 0..m {
            let vr = v[r] / norm;
            q[(r, j)] = vr;
        }
        for r in 0..n {
            q[(r, n + j)] = -q[(n + r, j)].conj();
            q[(n + r, n + j)] = q[(r, j)].conj();
        }
    }
    q
}

/// Haar element of the compact group of `series` acting on rank-`n` orbits:
/// `SO(2n+1)` for B, `Sp(2n)` for C and the full `O(2n)` for D.
pub fn haar_element<R: Rng + ?Sized>(series: Series, n: usize, rng: &mut R) -> LieMatrix {
    match series {
        Series::B => LieMatrix::Real(haar_special_orthogonal(2 * n + 1, rng)),
        Series::C => LieMatrix::Complex(haar_symplectic(n, rng)),
        Series::D => LieMatrix::Real(haar_orthogonal(2 * n, rng)),
    }
}

/// `g A g^{-1}` with `g^{-1} = g^T` or `g^H`.
pub fn conjugate(g: &LieMatrix, a: &LieMatrix) -> LieMatrix {
    match (g, a) {
        (LieMatrix::Real(g), LieMatrix::Real(a)) => LieMatrix::Real(g * a * g.transpose()),
        (g, a) => {
            let g = g.to_complex();
            LieMatrix::Complex(&g * a.to_complex() * g.adjoint())
        }
    }
}

fn corner_indices(series: Series, size: usize, k: usize, position: CornerPosition) -> Vec<usize> {
    match series {
        Series::B | Series::D => {
            let m = matrix_size(series, k);
            match position {
                CornerPosition::TopLeft => (0..m).collect(),
                CornerPosition::BottomRight => (size - m..size).collect(),
            }
        }
        Series::C => {
            let n = size / 2;
            let first = match position {
                CornerPosition::TopLeft => 0,
                CornerPosition::BottomRight => n - k,
            };
            (first..first + k).chain(n + first..n + first + k).collect()
        }
    }
}

fn rank_of(series: Series, size: usize) -> usize {
    match series {
        Series::B => (size.saturating_sub(1)) / 2,
        Series::C | Series::D => size / 2,
    }
}

/// Principal block realising the projection onto the rank-`k` subalgebra.
pub fn corner(series: Series, a: &LieMatrix, k: usize) -> Result<LieMatrix> {
    corner_at(series, a, k, CornerPosition::TopLeft)
}

pub fn corner_at(
    series: Series,
    a: &LieMatrix,
    k: usize,
    position: CornerPosition,
) -> Result<LieMatrix> {
    let n = rank_of(series, a.size());
    if k == 0 || k >= n {
        return Err(Error::ProjectionIndex { n, k });
    }
    let idx = corner_indices(series, a.size(), k, position);
    let m = idx.len();
    Ok(match a {
        LieMatrix::Real(a) => LieMatrix::Real(DMatrix::from_fn(m, m, |i, j| a[(idx[i], idx[j])])),
        LieMatrix::Complex(a) => {
            LieMatrix::Complex(DMatrix::from_fn(m, m, |i, j| a[(idx[i], idx[j])]))
        }
    })
}

fn check_structure(series: Series, a: &LieMatrix) -> Result<()> {
    let scale = 1.0
        + match a {
            LieMatrix::Real(m) => m.amax(),
            LieMatrix::Complex(m) => m.iter().map(|z| z.norm()).fold(0.0, f64::max),
        };
    let tol = STRUCTURE_TOL * scale;
    match (series, a) {
        (Series::B | Series::D, LieMatrix::Real(m)) => {
            let expected_odd = series == Series::B;
            if m.nrows() % 2 == 1 && !expected_odd || m.nrows() % 2 == 0 && expected_odd {
                return Err(Error::NotInAlgebra);
            }
            if (m + m.transpose()).amax() > tol {
                return Err(Error::NotInAlgebra);
            }
            Ok(())
        }
        (Series::C, LieMatrix::Complex(m)) => {
            let size = m.nrows();
            if size % 2 != 0 {
                return Err(Error::NotInAlgebra);
            }
            let skew = (m + m.adjoint())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if skew > tol {
                return Err(Error::NotInAlgebra);
            }
            let n = size / 2;
            // A J = J conj(A) <=> A[i, n+j] = -conj(A[n+i, j]) and A[n+i, n+j] = conj(A[i, j])
            for i in 0..n {
                for j in 0..n {
                    let e1 = (m[(i, n + j)] + m[(n + i, j)].conj()).norm();
                    let e2 = (m[(n + i, n + j)] - m[(i, j)].conj()).norm();
                    if e1 > tol || e2 > tol {
                        return Err(Error::NotInAlgebra);
                    }
                }
            }
            Ok(())
        }
        _ => Err(Error::NotInAlgebra),
    }
}

/// Coordinates `0 <= y_1 <= ... <= y_r` of an algebra element whose
/// eigenvalues are `+-i y_j` (plus one zero in odd dimension).
///
/// The spectrum is taken from the Hermitian matrix `iA`; its sorted
/// eigenvalues `l_1 <= ... <= l_m` pair as `l_j = -l_{m+1-j}`.
pub fn spectrum_nonneg(series: Series, a: &LieMatrix) -> Result<Vec<f64>> {
    check_structure(series, a)?;
    let m = a.size();
    let herm = a.to_complex() * Complex64::new(0.0, 1.0);
    // symmetrise away round-off before the Hermitian solver
    let herm = (&herm + herm.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eig: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let scale = 1.0 + eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut y = Vec::with_capacity(m / 2);
    for j in 0..m / 2 {
        let (lo, hi) = (eig[j], eig[m - 1 - j]);
        if (lo + hi).abs() > PAIRING_TOL * scale {
            return Err(Error::NotInAlgebra);
        }
        y.push(0.5 * (hi - lo));
    }
    if m % 2 == 1 && eig[m / 2].abs() > PAIRING_TOL * scale {
        return Err(Error::NotInAlgebra);
    }
    y.reverse();
    Ok(y)
}

/// Draws of the projected spectrum together with their provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub spec: OrbitSpec,
    pub k: usize,
    pub seed: u64,
    pub samples: Vec<Vec<f64>>,
}

/// JSON sidecar written next to a sample CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub series: Series,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "X")]
    pub x: Vec<f64>,
    #[serde(rename = "N")]
    pub count: usize,
    pub seed: u64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `i`-th coordinate of every draw, sorted increasingly.
    pub fn sorted_column(&self, i: usize) -> Vec<f64> {
        let mut col: Vec<f64> = self.samples.iter().map(|row| row[i]).collect();
        col.sort_by(f64::total_cmp);
        col
    }

    pub fn meta(&self) -> SampleMeta {
        SampleMeta {
            series: self.spec.series(),
            n: self.spec.rank(),
            k: self.k,
            x: self.spec.coords().to_vec(),
            count: self.samples.len(),
            seed: self.seed,
        }
    }

    /// Header `y_1,...,y_k` then one row per draw, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.k).map(|i| format!("y_{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in &self.samples {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        out.flush()
    }

    /// Writes the CSV to `path` and the metadata to [`sidecar_path`]`(path)`.
    pub fn write_files(&self, path: &Path) -> io::Result<PathBuf> {
        let file = std::fs::File::create(path)?;
        self.write_csv(io::BufWriter::new(file))?;
        let sidecar = sidecar_path(path);
        let json = serde_json::to_string_pretty(&self.meta()).map_err(io::Error::other)?;
        std::fs::write(&sidecar, json + "\n")?;
        Ok(sidecar)
    }
}

/// `samples.csv -> samples.json`; a path already ending in `.json` gets `.meta.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let candidate = path.with_extension("json");
    if candidate == path {
        path.with_extension("meta.json")
    } else {
        candidate
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn chunk_sizes(total: usize) -> Vec<usize> {
    (0..total.div_ceil(CHUNK))
        .map(|c| CHUNK.min(total - c * CHUNK))
        .collect()
}

/// `N` independent draws of the projected spectrum: `g ~ Haar`,
/// `A = g X g^{-1}`, `Y = spectrum(corner(A, k))`.
pub fn sample_projected_spectrum(
    spec: &OrbitSpec,
    k: usize,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    sample_projected_spectrum_at(spec, k, count, seed, CornerPosition::TopLeft)
}

pub fn sample_projected_spectrum_at(
    spec: &OrbitSpec,
    k: usize,
    count: usize,
    seed: u64,
    position: CornerPosition,
) -> Result<SampleBatch> {
    let n = spec.rank();
    if k == 0 || k >= n {
        return Err(Error::ProjectionIndex { n, k });
    }
    let series = spec.series();
    let canonical = canonical_matrix(spec);
    let chunks: Vec<Result<Vec<Vec<f64>>>> = chunk_sizes(count)
        .into_par_iter()
        .enumerate()
        .map(|(c, size)| {
            let mut rng = chunk_rng(seed, c);
            (0..size)
                .map(|_| {
                    let g = haar_element(series, n, &mut rng);
                    let a = conjugate(&g, &canonical);
                    spectrum_nonneg(series, &corner_at(series, &a, k, position)?)
                })
                .collect()
        })
        .collect();
    let mut samples = Vec::with_capacity(count);
    for chunk in chunks {
        samples.extend(chunk?);
    }
    Ok(SampleBatch {
        spec: spec.clone(),
        k,
        seed,
        samples,
    })
}

/// Invariant pairing `<T, A> = -1/2 Re tr(T A)` between the canonical
/// element with coordinates `t` and `a`; equals `sum t_j x_j` for `A` in
/// canonical form.
pub fn pairing(series: Series, t: &[f64], a: &LieMatrix) -> f64 {
    let n = t.len();
    match (series, a) {
        (Series::B | Series::D, LieMatrix::Real(m)) => {
            (0..n).map(|j| t[j] * m[(2 * j, 2 * j + 1)]).sum()
        }
        (Series::C, LieMatrix::Complex(m)) => {
            let half = m.nrows() / 2;
            (0..n)
                .map(|j| 0.5 * t[j] * (m[(j, j)].im - m[(half + j, half + j)].im))
                .sum()
        }
        _ => {
            let tm = canonical_from_coords(series, t).to_complex();
            -0.5 * (tm * a.to_complex()).trace().re
        }
    }
}

/// Monte Carlo estimate and standard error of `int exp(<T, Ad_g X>) dg`.
pub fn mc_orbital_laplace(
    spec: &OrbitSpec,
    t: &[f64],
    count: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = spec.rank();
    if t.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    if count == 0 {
        return Ok((f64::NAN, f64::NAN));
    }
    let series = spec.series();
    let canonical = canonical_matrix(spec);
    let sums: Vec<(f64, f64)> = chunk_sizes(count)
        .into_par_iter()
        .enumerate()
        .map(|(c, size)| {
            let mut rng = chunk_rng(seed, c);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..size {
                let g = haar_element(series, n, &mut rng);
                let v = pairing(series, t, &conjugate(&g, &canonical)).exp();
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums
        .iter()
        .fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let nf = count as f64;
    let mean = s / nf;
    let var = if count > 1 {
        ((s2 - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok((mean, (var / nf).sqrt()))
}

/// Kolmogorov–Smirnov distance `sup |F_N - F|` for sorted samples.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let nf = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i as f64 + 1.0) / nf - f;
            let below = f - i as f64 / nf;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// One-sample KS critical value at the 1% level, `1.63 / sqrt(N)`.
pub fn ks_critical_1pct(count: usize) -> f64 {
    1.63 / (count as f64).sqrt()
}
