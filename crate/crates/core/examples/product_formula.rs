//! The product formula and its conjugated form, term by term, certified
//! against the product of the expansions.
//!
//! ```bash
//! cargo run --example product_formula
//! ```

use complex_chaos::chaos::{certify_product, certify_product_conjugated, product, IDENTITY_TOLERANCE};
use complex_chaos::random::{case_rng, random_kernel};

fn main() -> complex_chaos::Result<()> {
    let mut rng = case_rng(42, 0);
    let f = random_kernel(2, 1, 2, &mut rng)?;
    let g = random_kernel(1, 1, 2, &mut rng)?;

    for t in product(&f, &g)?.summary() {
        println!(
            "(i, j) = ({}, {}): weight {:>3}, order {:?}, |kernel| {:.4}",
            t.i, t.j, t.weight, t.order, t.kernel_norm
        );
    }
    let r = certify_product(&f, &g, IDENTITY_TOLERANCE)?;
    println!("product: residual {:e}, pass {}", r.residual, r.pass);
    let r = certify_product_conjugated(&f, &g, IDENTITY_TOLERANCE)?;
    println!("conjugated: residual {:e}, pass {}", r.residual, r.pass);
    Ok(())
}
