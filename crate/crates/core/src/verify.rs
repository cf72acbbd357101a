//! Named verification suites. Each suite produces a list of cases with the
//! observed residual, the tolerance it is held to and a verdict, serialised
//! as `{suite, cases: [{name, residual, tolerance, pass}]}`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplace::{
    f_alpha, lemma1_reduced, lemma2_doubled, orbital_laplace, padded_dn_limit, OrbitSpec, Series,
};
use crate::montecarlo::{
    ks_critical_1pct, ks_statistic, mc_orbital_laplace, sample_projected_spectrum,
};
use crate::numerics::divided_difference;
use crate::radial::RadialDensity;
use crate::splines::{hermite_genocchi_residual, integrate_against, KnotVector};

pub const HERMITE_GENOCCHI_TOL: f64 = 1e-9;
pub const UNIT_MASS_TOL: f64 = 1e-10;
pub const LEMMA2_TOL: f64 = 1e-10;
pub const LEMMA1_TOL: f64 = 1e-4;
pub const NORMALIZATION_TOL: f64 = 1e-4;
pub const PROJECTION_IDENTITY_TOL: f64 = 1e-3;
pub const MC_STDERR_MULTIPLE: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Splines,
    Lemma2,
    Lemma1,
    Normalization,
    ProjectionIdentity,
    MonteCarlo,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Splines,
        Suite::Lemma2,
        Suite::Lemma1,
        Suite::Normalization,
        Suite::ProjectionIdentity,
        Suite::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Splines => "splines",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma1 => "lemma1",
            Suite::Normalization => "normalization",
            Suite::ProjectionIdentity => "projection-identity",
            Suite::MonteCarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseResult {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            // NaN residuals fail
            pass: residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> Option<&CaseResult> {
        self.cases
            .iter()
            .max_by(|a, b| (a.residual / a.tolerance).total_cmp(&(b.residual / b.tolerance)))
    }
}

/// Inputs shared by the suites; the orbit-dependent suites need `spec`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub spec: Option<OrbitSpec>,
    /// Projection rank; `None` runs every `1 <= k < n`.
    pub k: Option<usize>,
    pub npts: Option<usize>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            spec: None,
            k: None,
            npts: None,
            samples: 100_000,
            seed: 0x5eed,
        }
    }
}

impl SuiteConfig {
    fn spec(&self) -> Result<&OrbitSpec> {
        self.spec
            .as_ref()
            .ok_or(Error::MissingParameter("orbit (series and x)"))
    }

    fn ranks(&self) -> Result<Vec<usize>> {
        let n = self.spec()?.rank();
        match self.k {
            Some(k) if k == 0 || k >= n => Err(Error::ProjectionIndex { n, k }),
            Some(k) => Ok(vec![k]),
            None if n < 2 => Err(Error::ProjectionIndex { n, k: 1 }),
            None => Ok((1..n).collect()),
        }
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<VerifyReport> {
    let cases = match suite {
        Suite::Splines => spline_cases(config.npts.unwrap_or(16), config.seed),
        Suite::Lemma2 => lemma2_cases(100, config.seed),
        Suite::Lemma1 => lemma1_cases(config)?,
        Suite::Normalization => normalization_cases(config)?,
        Suite::ProjectionIdentity => projection_identity_cases(config)?,
        Suite::MonteCarlo => montecarlo_cases(config)?,
    };
    Ok(VerifyReport {
        suite: suite.name().to_string(),
        cases,
    })
}

/// Strictly increasing knots with gaps in `[0.1, 1.1)`.
pub fn random_knots(rng: &mut impl Rng, order: usize) -> KnotVector {
    let mut t = vec![rng.gen_range(-2.0..0.5)];
    for _ in 1..order {
        let last = t[t.len() - 1];
        t.push(last + rng.gen_range(0.1..1.1));
    }
    KnotVector::new(t).expect("increasing knots")
}

fn polynomial_derivative(coeffs: &[f64], order: usize, x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(p, c)| {
            let falling: f64 = (0..order).map(|i| (p - i) as f64).product();
            c * falling * x.powi((p - order) as i32)
        })
        .sum()
}

/// Hermite–Genocchi residuals for `exp`, `sin` and a degree-6 polynomial
/// over orders 2..=8, plus unit-mass checks.
pub fn spline_cases(npts: usize, seed: u64) -> Vec<CaseResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for order in 2..=8usize {
        for rep in 0..3 {
            let kv = random_knots(&mut rng, order);
            let m = order - 1;
            let r = hermite_genocchi_residual(f64::exp, f64::exp, &kv, npts);
            cases.push(CaseResult::new(
                format!("hg/exp/order{order}/{rep}"),
                r.abs(),
                HERMITE_GENOCCHI_TOL,
            ));
            let shift = m as f64 * std::f64::consts::FRAC_PI_2;
            let r = hermite_genocchi_residual(f64::sin, |x| (x + shift).sin(), &kv, npts);
            cases.push(CaseResult::new(
                format!("hg/sin/order{order}/{rep}"),
                r.abs(),
                HERMITE_GENOCCHI_TOL,
            ));
            let coeffs: Vec<f64> = (0..=6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = hermite_genocchi_residual(
                |x| polynomial_derivative(&coeffs, 0, x),
                |x| polynomial_derivative(&coeffs, m, x),
                &kv,
                npts,
            );
            cases.push(CaseResult::new(
                format!("hg/poly6/order{order}/{rep}"),
                r.abs(),
                HERMITE_GENOCCHI_TOL,
            ));
            let mass = integrate_against(&kv, |_| 1.0, npts);
            cases.push(CaseResult::new(
                format!("mass/order{order}/{rep}"),
                (mass - 1.0).abs(),
                UNIT_MASS_TOL,
            ));
        }
    }
    cases
}

/// Doubled-knot divided differences against the direct squared-knot form.
pub fn lemma2_cases(count: usize, seed: u64) -> Vec<CaseResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e33a2);
    (0..count)
        .map(|case| {
            let m = rng.gen_range(1..=5);
            let mut z = vec![rng.gen_range(0.3..0.9)];
            for _ in 1..m {
                let last = z[z.len() - 1];
                z.push(last + rng.gen_range(0.25..0.8));
            }
            let scale: f64 = rng.gen_range(1.0..2.5);
            let kind = case % 3;
            let f = move |s: f64| match kind {
                0 => (scale * s).cosh(),
                1 => (scale * s * s).exp(),
                _ => f_alpha(Series::B, scale * s),
            };
            let doubled = lemma2_doubled(f, &z).expect("valid points");
            let squares: Vec<f64> = z.iter().map(|v| v * v).collect();
            let direct = divided_difference(|y| f(y.sqrt()), &squares).expect("distinct squares");
            let label = ["cosh", "gauss", "sinhc"][kind];
            let rel = (doubled - direct).abs() / direct.abs();
            CaseResult::new(format!("lemma2/{label}/m{m}/{case}"), rel, LEMMA2_TOL)
        })
        .collect()
}

/// Deterministic generic corner point `t_i = base + step * i`.
pub fn generic_point(k: usize, base: f64, step: f64) -> Vec<f64> {
    (0..k).map(|i| base + step * i as f64).collect()
}

fn lemma1_cases(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let spec = config.spec()?;
    let mut cases = Vec::new();
    for k in config.ranks()? {
        for (label, tk) in [
            ("a", generic_point(k, 0.5, 0.4)),
            ("b", generic_point(k, 0.35, 0.55)),
        ] {
            let reduced = lemma1_reduced(spec, &tk)?;
            let limit = padded_dn_limit(spec.series(), &tk, spec.coords(), 1e-3)?;
            let rel = (reduced - limit).abs() / limit.abs();
            cases.push(CaseResult::new(
                format!("lemma1/k{k}/{label}"),
                rel,
                LEMMA1_TOL,
            ));
        }
    }
    Ok(cases)
}

fn normalization_cases(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let spec = config.spec()?;
    let npts = config.npts.unwrap_or(8);
    config
        .ranks()?
        .into_iter()
        .map(|k| {
            let rd = RadialDensity::new(spec.clone(), k)?;
            let mass = rd.normalization(npts);
            Ok(CaseResult::new(
                format!("normalization/k{k}"),
                (mass - 1.0).abs(),
                NORMALIZATION_TOL,
            ))
        })
        .collect()
}

fn projection_identity_cases(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let spec = config.spec()?;
    let npts = config.npts.unwrap_or(12);
    let mut cases = Vec::new();
    for k in config.ranks()? {
        let rd = RadialDensity::new(spec.clone(), k)?;
        for (label, tk) in [
            ("a", generic_point(k, 0.4, 0.5)),
            ("b", generic_point(k, 0.7, 0.35)),
        ] {
            let r = rd.projection_identity_residual(&tk, npts)?;
            cases.push(CaseResult::new(
                format!("projection-identity/k{k}/{label}"),
                r,
                PROJECTION_IDENTITY_TOL,
            ));
        }
    }
    Ok(cases)
}

fn montecarlo_cases(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let spec = config.spec()?;
    let n = spec.rank();
    let mut cases = Vec::new();

    let raw = generic_point(n, 0.3, 0.25);
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    let t: Vec<f64> = raw.iter().map(|v| v / norm.max(1.0)).collect();
    let exact = orbital_laplace(spec, &t)?;
    let (estimate, stderr) = mc_orbital_laplace(spec, &t, config.samples, config.seed)?;
    cases.push(CaseResult::new(
        "laplace/mc-vs-closed-form",
        (estimate - exact).abs(),
        MC_STDERR_MULTIPLE * stderr,
    ));

    for k in config.ranks()? {
        if k != 1 {
            continue;
        }
        let rd = RadialDensity::new(spec.clone(), 1)?;
        let batch =
            sample_projected_spectrum(spec, 1, config.samples, config.seed.wrapping_add(1))?;
        let sorted = batch.sorted_column(0);
        let d = ks_statistic(&sorted, |y| rd.cdf(y).unwrap_or(f64::NAN));
        cases.push(CaseResult::new(
            "radial/ks-k1",
            d,
            ks_critical_1pct(sorted.len()),
        ));
    }
    Ok(cases)
}
