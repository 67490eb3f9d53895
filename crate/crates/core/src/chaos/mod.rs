//! The theorem layer: chaos expansion of multiple integrals, product
//! formulas, isometry, the covariance identity for squared moduli, the
//! independence criterion and asymptotic-independence diagnostics.
//!
//! Every identity is certified against [`crate::oracle`].

mod asymptotic;
mod checks;
mod covariance;
mod expand;
mod independence;
mod polynomial;
mod product;
mod report;

pub use asymptotic::{asymptotic_diagnostics, AsymptoticTable, DiagnosticsRow, KernelSequence, PairDiagnostics};
pub use checks::{hypercontractivity_check, inner_product_check, integral_conjugate, isometry_check};
pub use covariance::{
    covariance_formula, covariance_formula_display_variant, covariance_squares, oracle_covariance, CovarianceOutcome,
    NEGATIVITY_FLOOR, PROOF_STEP_VARIANT,
};
pub use expand::{expand, expand_with_caps};
pub use independence::{first_order_contraction_norms, independence_check, moment_gap, MomentGap};
pub use polynomial::{ChaosPolynomial, Evaluator, Monomial};
pub use product::{
    certify_perturbed, certify_product, certify_product_conjugated, product, product_conjugated, ProductExpansion,
    ProductTerm, TermSummary,
};
pub use report::{Scalar, VerificationReport};

/// Relative residual bound for identities between floating expansions.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// Bound for checks that are exact up to rounding.
pub const EXACT_TOLERANCE: f64 = 1e-12;
