//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{PiecewiseCdf, Rule};
use orbital_radial::laplace::{
    lemma1_reduced, lemma2_doubled, orbital_laplace, restricted_orbital_laplace,
};
use orbital_radial::montecarlo::{mc_orbital_laplace, sample_projected_spectrum};
use orbital_radial::splines::{
    hermite_genocchi_residual, mspline_derivative, mspline_eval, mspline_eval_stable,
};
use orbital_radial::{KnotVector, OrbitSpec, RadialDensity, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Func<'a> = dyn Fn(f64) -> f64 + 'a;
type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self {
            ok,
            detail: detail.into(),
        }
    }
}

fn random_knots(rng: &mut ChaCha8Rng, order: usize) -> Vec<f64> {
    let mut t = vec![rng.gen_range(-2.0..1.0)];
    for _ in 1..order {
        let last = t[t.len() - 1];
        t.push(last + rng.gen_range(0.1..1.5));
    }
    t
}

fn spline_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rule = Rule::new(8);
    let (mut worst_mass, mut worst_eval, mut bad_sign, mut bad_support) = (0.0f64, 0.0f64, 0, 0);
    for case in 0..50 {
        let order = 2 + case % 9;
        let t = random_knots(&mut rng, order);
        let kv = KnotVector::new(t.clone()).unwrap();
        for eval in [mspline_eval, mspline_eval_stable] {
            let mass = rule.composite(|s| eval(&kv, s), &t);
            worst_mass = worst_mass.max((mass - 1.0).abs());
            let (a, b) = (t[0], t[order - 1]);
            for off in [1e-9, 0.01, 0.5, 3.0] {
                if eval(&kv, a - off) != 0.0 || eval(&kv, b + off - 1e-9) != 0.0 {
                    bad_support += 1;
                }
            }
            for i in 0..200 {
                let s = a + (b - a) * (i as f64 + 0.5) / 200.0;
                let v = eval(&kv, s);
                if v < 0.0 {
                    bad_sign += 1;
                }
                let reference = common::bspline(&t, s);
                worst_eval = worst_eval.max((v - reference).abs() / reference.abs().max(1e-3));
            }
        }
    }
    let ok = worst_mass <= 1e-10 && bad_sign == 0 && bad_support == 0 && worst_eval <= 1e-9;
    Outcome::new(
        ok,
        format!(
            "max |mass - 1| = {worst_mass:.1e}, negatives {bad_sign}, nonzero outside {bad_support}, max eval error vs recursion {worst_eval:.1e}"
        ),
    )
}

fn hermite_genocchi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rule = Rule::new(10);
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for order in 2..=8usize {
        let t = random_knots(&mut rng, order);
        let kv = KnotVector::new(t.clone()).unwrap();
        let p = order - 1;
        let coeffs: Vec<f64> = (0..=6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let poly = |s: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);
        // p-th derivative of the polynomial, coefficient of s^j is c_{j+p} (j+p)!/j!
        let dpoly = |s: f64| {
            (p..coeffs.len())
                .map(|j| {
                    coeffs[j]
                        * ((j - p + 1)..=j).map(|v| v as f64).product::<f64>()
                        * s.powi((j - p) as i32)
                })
                .sum::<f64>()
        };
        let dsin = move |s: f64| match p % 4 {
            0 => s.sin(),
            1 => s.cos(),
            2 => -s.sin(),
            _ => -s.cos(),
        };
        let cases: [(&Func<'_>, &Func<'_>); 3] =
            [(&f64::exp, &f64::exp), (&f64::sin, &dsin), (&poly, &dpoly)];
        let fact: f64 = (1..order).map(|v| v as f64).product();
        for (f, df) in cases {
            worst = worst.max(hermite_genocchi_residual(f, df, &kv, 8).abs());
            let lhs = common::lagrange_dd(f, &t);
            let rhs = rule.composite(|s| df(s) * common::bspline(&t, s), &t) / fact;
            worst_oracle = worst_oracle.max((lhs - rhs).abs());
        }
    }
    Outcome::new(
        worst <= 1e-9 && worst_oracle <= 1e-9,
        format!("max residual {worst:.1e} (independent recomputation {worst_oracle:.1e})"),
    )
}

fn derivative_recurrence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let order = rng.gen_range(3..=10);
        let t = random_knots(&mut rng, order);
        let s = rng.gen_range(t[0]..t[order - 1]);
        if t.iter().any(|k| (k - s).abs() < 1e-3) {
            continue;
        }
        let kv = KnotVector::new(t.clone()).unwrap();
        let h = 1e-5;
        let fd = (common::bspline(&t, s + h) - common::bspline(&t, s - h)) / (2.0 * h);
        worst = worst.max((mspline_derivative(&kv, s).unwrap() - fd).abs());
        done += 1;
    }
    Outcome::new(
        worst <= 1e-6,
        format!("max |M' - central difference| = {worst:.1e}"),
    )
}

fn doubled_knots() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let m = rng.gen_range(1..=5);
        let mut z = vec![rng.gen_range(0.3..0.9)];
        for _ in 1..m {
            let last = z[z.len() - 1];
            z.push(last + rng.gen_range(0.25..0.8));
        }
        let a: f64 = rng.gen_range(1.0..2.5);
        let f = move |s: f64| match case % 3 {
            0 => (a * s).cosh(),
            1 => (a * s * s).exp(),
            _ => common::f_alpha(Series::B, a * s),
        };
        let doubled = lemma2_doubled(f, &z).unwrap();
        let squares: Vec<f64> = z.iter().map(|v| v * v).collect();
        let direct = common::lagrange_dd(|y| f(y.sqrt()), &squares);
        worst = worst.max((doubled - direct).abs() / direct.abs());
    }
    Outcome::new(
        worst <= 1e-10,
        format!("max relative gap {worst:.1e} over 100 cases"),
    )
}

fn harish_chandra_vs_monte_carlo() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut parts = Vec::new();
    for series in Series::ALL {
        let start = Instant::now();
        let x = [1.0, 2.0];
        let spec = OrbitSpec::new(series, x.to_vec()).unwrap();
        let angle: f64 = rng.gen_range(0.2..1.3);
        let radius: f64 = rng.gen_range(0.5..1.0);
        let t = [radius * angle.cos(), radius * angle.sin()];
        let hc = orbital_laplace(&spec, &t).unwrap();
        let oracle = common::orbital_laplace(series, &t, &x);
        let (mc, se) = mc_orbital_laplace(&spec, &t, 100_000, 50 + series as u64).unwrap();
        let z = (mc - hc).abs() / se;
        let elapsed = start.elapsed();
        let pass = z <= 3.0
            && (hc - oracle).abs() <= 1e-12 * oracle.abs()
            && elapsed < Duration::from_secs(60);
        ok &= pass;
        parts.push(format!(
            "{series}: HC {hc:.5} MC {mc:.5}±{se:.5} ({z:.2} se, {:.1}s)",
            elapsed.as_secs_f64()
        ));
    }
    Outcome::new(ok, parts.join("; "))
}

fn reduced_corner_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for series in Series::ALL {
        for n in 2..=3usize {
            let x: Vec<f64> = [1.0, 1.7, 2.6][..n].to_vec();
            let spec = OrbitSpec::new(series, x.clone()).unwrap();
            for k in 1..n {
                for tk in [[0.6, 1.1], [1.3, 0.4]] {
                    let tk = &tk[..k];
                    let reduced = lemma1_reduced(&spec, tk).unwrap();
                    let limit = common::padded_limit(series, tk, &x);
                    worst = worst.max((reduced - limit).abs() / limit.abs());
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-4,
        format!("max relative gap to padded limit {worst:.1e}"),
    )
}

fn normalization() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_lib = 0.0f64;
    let mut count = 0;
    for series in Series::ALL {
        for n in 2..=4usize {
            for base in [[1.0, 2.0, 3.0, 4.0], [0.9, 1.6, 2.4, 2.9]] {
                let x = base[..n].to_vec();
                for k in 1..n {
                    let rd =
                        RadialDensity::new(OrbitSpec::new(series, x.clone()).unwrap(), k).unwrap();
                    let mut breaks = vec![0.0];
                    breaks.extend(&x);
                    let rules: Vec<Rule> = (0..k).map(|_| Rule::new(6)).collect();
                    let kfact: f64 = (1..=k).map(|v| v as f64).product();
                    let mass =
                        common::cube_integral(|y| rd.density(y).unwrap(), &breaks, &rules) / kfact;
                    worst = worst.max((mass - 1.0).abs());
                    worst_lib = worst_lib.max((rd.normalization(6) - 1.0).abs());
                    count += 1;
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-4 && worst_lib <= 1e-4,
        format!(
            "max |mass - 1| = {worst:.1e} (library quadrature {worst_lib:.1e}) over {count} cases"
        ),
    )
}

fn projection_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_lib = 0.0f64;
    for series in Series::ALL {
        for n in 2..=3usize {
            let x: Vec<f64> = [1.0, 1.7, 2.6][..n].to_vec();
            let spec = OrbitSpec::new(series, x.clone()).unwrap();
            for k in 1..n {
                let rd = RadialDensity::new(spec.clone(), k).unwrap();
                let mut breaks = vec![0.0];
                breaks.extend(&x);
                // distinct even orders keep nodes off the diagonal y_i = y_j
                let rules: Vec<Rule> = (0..k).map(|a| Rule::new(12 + 2 * a)).collect();
                let kfact: f64 = (1..=k).map(|v| v as f64).product();
                for tk in [[0.7, 1.2], [1.4, 0.45]] {
                    let tk = &tk[..k];
                    let lhs =
                        common::hc_prefactor(series, n) * common::padded_limit(series, tk, &x);
                    let rhs = common::cube_integral(
                        |y| rd.density(y).unwrap() * common::orbital_laplace(series, tk, y),
                        &breaks,
                        &rules,
                    ) / kfact;
                    worst = worst.max((lhs - rhs).abs() / lhs.abs());
                    worst_lib = worst_lib.max(rd.projection_identity_residual(tk, 12).unwrap());
                    let restricted = restricted_orbital_laplace(&spec, tk).unwrap();
                    worst_lib = worst_lib.max((restricted - lhs).abs() / lhs.abs());
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-3 && worst_lib <= 1e-3,
        format!("max relative residual {worst:.1e} (library residual {worst_lib:.1e})"),
    )
}

fn monte_carlo_law() -> Outcome {
    const N: usize = 100_000;
    let critical = 1.63 / (N as f64).sqrt();
    let mut ok = true;
    let mut parts = Vec::new();
    for series in Series::ALL {
        for n in 2..=3usize {
            let start = Instant::now();
            let x: Vec<f64> = (1..=n).map(|v| v as f64).collect();
            let spec = OrbitSpec::new(series, x.clone()).unwrap();
            let rd = RadialDensity::new(spec.clone(), 1).unwrap();
            let mut breaks = vec![0.0];
            breaks.extend(&x);
            let cdf = PiecewiseCdf::new(|y| rd.density(&[y]).unwrap(), breaks, 8);
            let batch = sample_projected_spectrum(&spec, 1, N, 900 + 10 * series as u64 + n as u64)
                .unwrap();
            let d = common::ks_distance(&batch.sorted_column(0), |y| cdf.eval(y));
            let elapsed = start.elapsed();
            let pass = d < critical && elapsed < Duration::from_secs(120);
            ok &= pass;
            parts.push(format!(
                "{series}{n}: D={d:.5}{} ({:.1}s)",
                if d < critical { "" } else { " REJECT" },
                elapsed.as_secs_f64()
            ));
        }
    }
    Outcome::new(ok, format!("critical {critical:.5}; {}", parts.join(", ")))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_orbital-radial"))
            .args([
                "sample",
                "--series",
                "C",
                "--x",
                "1,2,3",
                "--k",
                "2",
                "--samples",
                "20000",
                "--seed",
                "7",
            ])
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let csv = std::fs::read(&out).unwrap();
        let meta = std::fs::read(out.with_extension("json")).unwrap();
        (csv, meta)
    };
    let first = run("a.csv");
    let second = run("b.csv");
    let ok = first == second && !first.0.is_empty();
    Outcome::new(
        ok,
        format!(
            "two runs, {} CSV bytes, identical: {}",
            first.0.len(),
            first == second
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("spline axioms", Duration::from_secs(5), spline_axioms),
        ("Hermite-Genocchi", Duration::from_secs(5), hermite_genocchi),
        (
            "derivative recurrence",
            Duration::from_secs(5),
            derivative_recurrence,
        ),
        (
            "doubled-knot reduction",
            Duration::from_secs(2),
            doubled_knots,
        ),
        (
            "Harish-Chandra vs Monte Carlo",
            Duration::from_secs(180),
            harish_chandra_vs_monte_carlo,
        ),
        (
            "corner reduction vs padded limit",
            Duration::from_secs(10),
            reduced_corner_consistency,
        ),
        ("normalization", Duration::from_secs(60), normalization),
        (
            "projection identity",
            Duration::from_secs(60),
            projection_identity,
        ),
        (
            "Monte Carlo law (KS)",
            Duration::from_secs(720),
            monte_carlo_law,
        ),
        (
            "sampling determinism",
            Duration::from_secs(600),
            determinism,
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let ok = outcome.ok && elapsed <= limit;
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
