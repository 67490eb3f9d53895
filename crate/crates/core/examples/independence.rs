//! The independence criterion on disjoint and overlapping kernels, with the
//! moment-factorization gap as a cross-check.
//!
//! ```bash
//! cargo run --example independence
//! ```

use complex_chaos::chaos::{independence_check, moment_gap};
use complex_chaos::expand;
use complex_chaos::kernels::Kernel;
use num_complex::Complex64;

fn main() -> complex_chaos::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let e11 = Kernel::elementary(1, 1, 2, &[0, 0], one)?;
    let e22 = Kernel::elementary(1, 1, 2, &[1, 1], one)?;

    for (label, f, g) in [("e11 vs e22", &e11, &e22), ("e11 vs e11", &e11, &e11)] {
        let r = independence_check(f, g, 1e-12)?;
        let gap = moment_gap(&[expand(f)?, expand(g)?], 4);
        println!(
            "{label}: criterion pass {}, residual {}, covariance {:?}, moment gap {}",
            r.pass,
            r.residual,
            r.real("covariance"),
            gap.absolute
        );
    }
    Ok(())
}
