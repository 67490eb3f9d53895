//! Runs every certification suite at acceptance size and prints one line
//! per suite with its wall time.

use std::time::Instant;

use complex_chaos::suite::{self, SuiteConfig};
use complex_chaos::{oracle, Result, VerificationReport};

fn timed(name: &str, f: impl FnOnce() -> Result<VerificationReport>) -> Result<()> {
    let start = Instant::now();
    let r = f()?;
    println!(
        "{:<24} {:<5} residual {:>10.3e} tol {:>8.1e}  {:>7.2}s",
        name,
        if r.pass { "PASS" } else { "FAIL" },
        r.residual,
        r.tolerance,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn main() -> Result<()> {
    let cfg = SuiteConfig::default();
    timed("product", || suite::product_grid(&cfg, false, 0.0))?;
    timed("product-conjugated", || suite::product_grid(&cfg, true, 0.0))?;
    timed("isometry", || suite::isometry_grid(&cfg))?;
    timed("conjugate-lemma", || suite::conjugate_grid(&cfg))?;
    timed("covariance", || suite::covariance_grid(&cfg))?;
    timed("independence-disjoint", || suite::independence_disjoint(&cfg, 6))?;
    timed("independence-overlap", suite::independence_overlap)?;
    timed("independence-random", || suite::independence_random(&cfg, 200))?;
    timed("hermite-product", || Ok(suite::hermite_product_check(8)))?;
    timed("hermite-orthogonality", || Ok(suite::hermite_orthogonality(6, 1.0)))?;
    timed("hypercontractivity", || suite::hypercontractivity_grid(&cfg, 100, 4))?;
    timed("asymptotic", || suite::asymptotic_decay(64))?;
    timed("mc-estimate", || suite::monte_carlo_isometry(&cfg, 50))?;
    timed("oracle-quadrature", || Ok(oracle::quadrature_cross_check(4, 40)))?;
    Ok(())
}
