//! Cross-checks the exact moment rule against Gauss-Hermite quadrature.
//!
//! ```bash
//! cargo run --example oracle_quadrature
//! ```

use complex_chaos::oracle::{monomial_expectation, quadrature_cross_check, MomentQuery};

fn main() -> complex_chaos::Result<()> {
    for (a, b) in [(1, 1), (2, 2), (3, 3), (2, 1)] {
        let q = MomentQuery::new(vec![a], vec![b])?;
        println!("E[z^{a} zb^{b}] = {}", monomial_expectation(&q));
    }
    let r = quadrature_cross_check(4, 40);
    println!("quadrature agreement: residual {:e}, pass {}", r.residual, r.pass);
    Ok(())
}
