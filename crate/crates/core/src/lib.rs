//! Radial parts of corner projections of orbital measures for the compact
//! groups `SO(2n+1)`, `Sp(2n)` and `O(2n)`.
//!
//! The crate evaluates the closed-form density of the projected spectrum,
//! expressed through determinants of B-splines with knots symmetric about
//! zero, together with the tools used to check it independently:
//!
//! * [`numerics`]: divided differences, determinants, Gauss–Legendre rules.
//! * [`splines`]: unit-mass B-splines, derivatives, Hermite–Genocchi check.
//! * [`laplace`]: Harish-Chandra orbital Laplace transforms and their
//!   restriction to a corner via divided differences.
//! * [`radial`]: the density itself, its constants, normalisation and the
//!   Laplace-transform identity that characterises it.
//! * [`montecarlo`]: Haar sampling, corner spectra and KS statistics.
//! * [`verify`]: named verification suites with JSON reports.
//! * [`cli`]: the `orbital-radial` command line.

pub mod cli;
pub mod error;
pub mod laplace;
pub mod montecarlo;
pub mod numerics;
pub mod radial;
pub mod splines;
pub mod verify;

pub use error::{Error, Result};
pub use laplace::{OrbitSpec, Series};
pub use radial::{make_params, RadialDensity, SeriesParams};
pub use splines::KnotVector;
