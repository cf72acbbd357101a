//! Unit-mass B-splines: values, derivative, and the Hermite–Genocchi identity.

use orbital_radial::splines::{
    hermite_genocchi_residual, integrate_against, mspline_derivative, mspline_eval_stable,
    symmetric_knots,
};
use orbital_radial::KnotVector;

fn main() -> orbital_radial::Result<()> {
    let kv = KnotVector::new(vec![-1.0, 0.0, 0.5, 2.0])?;
    println!("knots {:?}", kv.knots());
    for t in [-0.5, 0.0, 0.25, 1.0, 1.9] {
        println!(
            "  M({t:5.2}) = {:.6}   M'({t:5.2}) = {:+.6}",
            mspline_eval_stable(&kv, t),
            mspline_derivative(&kv, t)?
        );
    }
    println!("  mass = {:.15}", integrate_against(&kv, |_| 1.0, 8));

    // divided difference of exp against int exp''' M / 3!
    let r = hermite_genocchi_residual(f64::exp, f64::exp, &kv, 10);
    println!("  Hermite-Genocchi residual for exp: {r:.2e}");

    let sym = symmetric_knots(&[0.5, 1.0, 2.0], 0, 2)?;
    println!("symmetric knots {:?}", sym.knots());
    for t in [0.3, 1.2] {
        println!(
            "  M({t}) = {:.6}, M(-{t}) = {:.6}",
            mspline_eval_stable(&sym, t),
            mspline_eval_stable(&sym, -t)
        );
    }
    Ok(())
}
