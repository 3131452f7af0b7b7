//! Analytic spectra for quartic and sextic anharmonic oscillators.
//!
//! The crate builds closed-form approximants to the WKB action integrals by a
//! convergent delta expansion of an interpolated potential, fixes the
//! interpolation frequency by the principle of minimal sensitivity, and solves
//! the resulting quantization condition. Brute-force oracles (singularity-free
//! quadrature and a harmonic-basis diagonalization) quantify every error.

pub mod delta;
pub mod error;
pub mod exact;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod wkb;
pub mod zeta;

pub use error::{Error, Result};
pub use model::{Family, HarmonicSpec, Potential, PotentialSpec, TurningData};
pub use quadrature::{IntegralKind, IntegralValue, QuadRule};
