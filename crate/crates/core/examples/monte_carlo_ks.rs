//! Sample corner spectra and compare them with the analytic law.

use orbital_radial::montecarlo::{ks_critical_1pct, ks_statistic, sample_projected_spectrum};
use orbital_radial::{OrbitSpec, RadialDensity, Series};

fn main() -> orbital_radial::Result<()> {
    let n = 100_000;
    for series in Series::ALL {
        let spec = OrbitSpec::new(series, vec![1.0, 2.0, 3.0])?;
        let rd = RadialDensity::new(spec.clone(), 1)?;
        let batch = sample_projected_spectrum(&spec, 1, n, 2024)?;
        let d = ks_statistic(&batch.sorted_column(0), |y| rd.cdf(y).unwrap());
        println!(
            "{series}: KS = {d:.5} (1% critical {:.5}) {}",
            ks_critical_1pct(n),
            if d < ks_critical_1pct(n) {
                "accept"
            } else {
                "reject"
            }
        );
    }

    let spec = OrbitSpec::new(Series::B, vec![1.0, 2.0, 3.0])?;
    let batch = sample_projected_spectrum(&spec, 2, 5, 9)?;
    println!("a few k = 2 draws from SO(7):");
    for y in &batch.samples {
        println!("  ({:.4}, {:.4})", y[0], y[1]);
    }
    Ok(())
}
