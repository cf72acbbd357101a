//! The corner Laplace transform equals the density-weighted mixture of
//! lower-rank orbital transforms.

use orbital_radial::laplace::restricted_orbital_laplace;
use orbital_radial::{OrbitSpec, RadialDensity, Series};

fn main() -> orbital_radial::Result<()> {
    for series in Series::ALL {
        let spec = OrbitSpec::new(series, vec![0.7, 1.5, 2.2, 3.0])?;
        for k in 1..=3 {
            let rd = RadialDensity::new(spec.clone(), k)?;
            let tk: Vec<f64> = (0..k).map(|i| 0.4 + 0.35 * i as f64).collect();
            let direct = restricted_orbital_laplace(&spec, &tk)?;
            let mixture = rd.mixture_laplace(&tk, 8)?;
            println!("{series} n=4 k={k}: corner {direct:.10}  mixture {mixture:.10}");
        }
    }
    Ok(())
}
