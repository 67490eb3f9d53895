//! Expanding multiple integrals into Gaussian polynomials and taking exact
//! expectations.
//!
//! ```bash
//! cargo run --example chaos_expansion
//! ```

use complex_chaos::chaos::{isometry_check, ChaosPolynomial};
use complex_chaos::kernels::Kernel;
use complex_chaos::{expand, oracle};
use num_complex::Complex64;

fn main() -> complex_chaos::Result<()> {
    let one = Complex64::new(1.0, 0.0);

    let f = Kernel::elementary(1, 1, 1, &[0, 0], one)?;
    let p = expand(&f)?;
    println!("I_{{1,1}}(e1 x e1) = {p}");
    println!("E[I]        = {}", oracle::expectation(&p));
    println!("E|I|^2      = {}", oracle::second_moment(&p));

    let g = Kernel::elementary(2, 1, 2, &[0, 1, 0], Complex64::new(0.5, -1.0))?;
    let q = expand(&g)?;
    println!("I_{{2,1}}(g) = {q}");
    let r = isometry_check(&g)?;
    println!(
        "isometry: oracle {:?}, p!q!|g~|^2 {:?}, pass {}",
        r.real("oracle_second_moment"),
        r.real("formula"),
        r.pass
    );

    let z = ChaosPolynomial::coordinate(0, 1);
    println!("E|z|^4 = {}", oracle::expectation(&(&z * &z).modulus_squared()));
    Ok(())
}
