//! Building kernels, symmetrizing them, contracting and conjugating.
//!
//! ```bash
//! cargo run --example kernels
//! ```

use complex_chaos::kernels::{ContractionSpec, DiscreteMeasure, Kernel};
use num_complex::Complex64;

fn show(coeffs: &[Complex64]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> complex_chaos::Result<()> {
    let one = Complex64::new(1.0, 0.0);

    // e1 (x) e2 of order (2, 0) on two cells.
    let f = Kernel::elementary(2, 0, 2, &[0, 1], one)?;
    let ito = f.ito_symmetrize();
    println!("f~ (Ito)       = {}", show(ito.coeffs()));
    println!("|f~|^2         = {}", ito.norm_sqr());

    // Order (1, 1): Ito symmetrization leaves it alone, ordinary does not.
    let g = Kernel::elementary(1, 1, 2, &[0, 1], one)?;
    println!("(1,1) Ito      = {}", show(g.ito_symmetrize().coeffs()));
    println!("(1,1) ordinary = {}", show(g.ordinary_symmetrize().coeffs()));

    // Contractions of e1 (x) e1 with itself.
    let e11 = Kernel::elementary(1, 1, 2, &[0, 0], one)?;
    for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let c = e11.contract(&e11, ContractionSpec::new(i, j))?;
        println!("e11 (x)_{{{i},{j}}} e11: order {:?}, norm {}", c.order(), c.norm());
    }

    // The reversed conjugate swaps the blocks and conjugates.
    let k = Kernel::elementary(2, 1, 2, &[0, 1, 1], Complex64::new(0.0, 2.0))?;
    let h = k.reversed_conjugate();
    for (idx, c) in h.nonzero_entries() {
        println!("h of order {:?}: h{idx:?} = {c}", h.order());
    }

    // Indicator coordinates: 1_{E_1} has norm sqrt(mu_1).
    let mu = DiscreteMeasure::new(vec![0.25, 0.75])?;
    let ind = Kernel::from_indicator(1, 0, &mu, [(vec![0], one)])?;
    println!("|1_E1| = {} (sqrt(0.25))", ind.norm());
    Ok(())
}
