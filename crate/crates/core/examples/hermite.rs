//! Complex Hermite polynomials, their product identity and the variance at
//! which that identity holds.
//!
//! ```bash
//! cargo run --example hermite
//! ```

use complex_chaos::hermite::{hermite_product, resolve_rho, HermitePolynomial};

fn main() {
    for (m, n) in [(1, 0), (1, 1), (2, 1), (2, 2)] {
        println!("J_{{{m},{n}}}(z, 1) = {}", HermitePolynomial::build(m, n, 1.0));
    }
    println!("J_{{2,2}}(z, 2) = {}", HermitePolynomial::build(2, 2, 2.0));

    println!("J_{{1,1}} J_{{1,1}} = sum over {:?}", hermite_product(1, 1, 1, 1));

    let r = resolve_rho(8);
    println!("certified rho: {:?}", r.certified_rho);
    for (rho, residual) in r.residuals {
        println!("  rho = {rho}: worst residual {residual:e}");
    }
}
