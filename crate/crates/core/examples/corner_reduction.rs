//! Doubled-knot divided differences and the reduced corner transform
//! compared with a limit of the full determinant formula.

use orbital_radial::laplace::{f_alpha, lemma1_reduced, lemma2_doubled, padded_dn_limit};
use orbital_radial::numerics::divided_difference;
use orbital_radial::{OrbitSpec, Series};

fn main() -> orbital_radial::Result<()> {
    let z = [0.5, 1.1, 1.8];
    let doubled = lemma2_doubled(f64::cosh, &z)?;
    let squares: Vec<f64> = z.iter().map(|v| v * v).collect();
    let direct = divided_difference(|y: f64| y.sqrt().cosh(), &squares)?;
    println!("doubled knots {doubled:.12}  squared knots {direct:.12}");

    let x = [1.0, 1.6, 2.5];
    for series in Series::ALL {
        let spec = OrbitSpec::new(series, x.to_vec())?;
        for tk in [vec![0.8], vec![0.5, 1.2]] {
            let reduced = lemma1_reduced(&spec, &tk)?;
            let limit = padded_dn_limit(series, &tk, &x, 1e-3)?;
            println!("{series} T = {tk:?}: reduced {reduced:.9e}  limit {limit:.9e}");
        }
    }
    println!(
        "f_alpha(1) for B and D: {:.6} {:.6}",
        f_alpha(Series::B, 1.0),
        f_alpha(Series::D, 1.0)
    );
    Ok(())
}
