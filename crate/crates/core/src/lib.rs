//! Complex multiple Wiener-Ito integrals over a discretized control measure.
//!
//! Kernels live on `n` cells with masses `mu_k`. A kernel of order `(p, q)`
//! expands into a polynomial in independent standard complex Gaussians
//! `z_k` and their conjugates, and every identity between integrals becomes
//! an identity between polynomials whose expectations are known exactly.

pub mod chaos;
pub mod cli;
pub mod error;
pub mod hermite;
pub mod kernels;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod random;
pub mod suite;

pub use chaos::{expand, ChaosPolynomial, VerificationReport};
pub use error::{ChaosError, Result};
pub use kernels::{Caps, ContractionSpec, DiscreteMeasure, Kernel};
