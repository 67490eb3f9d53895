//! Covariance of squared moduli from contraction norms, against the oracle.
//!
//! ```bash
//! cargo run --example covariance
//! ```

use complex_chaos::chaos::covariance_squares;
use complex_chaos::kernels::Kernel;
use complex_chaos::random::{case_rng, random_kernel};
use num_complex::Complex64;

fn main() -> complex_chaos::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let e11 = Kernel::elementary(1, 1, 1, &[0, 0], one)?;
    let out = covariance_squares(&e11, &e11)?;
    println!("Var((|z|^2 - 1)^2): formula {}, oracle {}", out.formula, out.oracle);

    let mut rng = case_rng(7, 1);
    let f = random_kernel(2, 1, 2, &mut rng)?;
    let g = random_kernel(1, 2, 2, &mut rng)?;
    let out = covariance_squares(&f, &g)?;
    println!(
        "random (2,1) vs (1,2): formula {:.12}, oracle {:.12}",
        out.formula, out.oracle
    );
    println!(
        "display weighting gives {:?} (residual {:?})",
        out.report.real("display_variant_value"),
        out.report.real("display_variant_residual")
    );
    Ok(())
}
