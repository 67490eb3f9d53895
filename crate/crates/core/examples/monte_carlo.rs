//! Seeded Monte Carlo estimates of chaos moments next to their exact values.
//!
//! ```bash
//! cargo run --release --example monte_carlo
//! ```

use complex_chaos::kernels::Kernel;
use complex_chaos::montecarlo::{estimate, SamplePlan, GENERATOR};
use complex_chaos::{expand, oracle};
use num_complex::Complex64;

fn main() -> complex_chaos::Result<()> {
    println!("generator: {GENERATOR}");
    let plan = SamplePlan::new(42, 100_000, 2)?;
    let f = Kernel::elementary(1, 1, 2, &[0, 1], Complex64::new(1.0, 0.0))?;
    let sq = expand(&f)?.modulus_squared();
    let est = estimate(&sq, plan)?;
    println!(
        "E|I(e1 x e2)|^2: estimate {:.5} +- {:.5}, exact {}",
        est.value.re,
        est.std_error,
        oracle::expectation(&sq).re
    );
    Ok(())
}
