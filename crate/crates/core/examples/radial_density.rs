//! Tabulate the radial density of a rank-one corner and its CDF.

use orbital_radial::{OrbitSpec, RadialDensity, Series};

fn main() -> orbital_radial::Result<()> {
    let spec = OrbitSpec::new(Series::C, vec![1.0, 2.0, 3.0])?;
    let rd = RadialDensity::new(spec, 1)?;
    let p = rd.params();
    println!(
        "Sp(6), X = (1, 2, 3), k = 1: kappa = {}, c = {}",
        p.kappa, p.c
    );
    println!("{:>6} {:>10} {:>10}", "y", "density", "cdf");
    for i in 0..=12 {
        let y = 3.0 * i as f64 / 12.0;
        println!("{y:6.3} {:10.6} {:10.6}", rd.density(&[y])?, rd.cdf(y)?);
    }

    let rd2 = RadialDensity::new(OrbitSpec::new(Series::D, vec![1.0, 2.0, 3.0])?, 2)?;
    println!("O(6), k = 2: total mass {:.12}", rd2.normalization(6));
    println!("density at (0.7, 1.6) = {:.6}", rd2.density(&[0.7, 1.6])?);
    Ok(())
}
