//! Harish-Chandra orbital Laplace transform against a Haar-sampled average.

use orbital_radial::laplace::orbital_laplace;
use orbital_radial::montecarlo::mc_orbital_laplace;
use orbital_radial::{OrbitSpec, Series};

fn main() -> orbital_radial::Result<()> {
    let t = [0.45, 0.8];
    for series in Series::ALL {
        let spec = OrbitSpec::new(series, vec![1.0, 2.0])?;
        let exact = orbital_laplace(&spec, &t)?;
        let (mean, se) = mc_orbital_laplace(&spec, &t, 200_000, 1)?;
        println!(
            "{:<8} closed form {exact:.6}   Monte Carlo {mean:.6} ± {se:.6}   ({:+.2} se)",
            series.group_name(2),
            (mean - exact) / se
        );
    }
    Ok(())
}
