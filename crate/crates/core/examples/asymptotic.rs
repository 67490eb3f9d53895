//! Asymptotic-independence diagnostics for a pair of sequences whose overlap
//! vanishes like 1/k.
//!
//! ```bash
//! cargo run --example asymptotic
//! ```

use complex_chaos::chaos::asymptotic_diagnostics;
use complex_chaos::suite::vanishing_overlap_sequences;

fn main() -> complex_chaos::Result<()> {
    let table = asymptotic_diagnostics(&vanishing_overlap_sequences(16)?, 4)?;
    println!(
        "{:>3} {:>12} {:>12} {:>12}",
        "k", "contraction", "covariance", "moment gap"
    );
    for row in &table.rows {
        println!(
            "{:>3} {:>12.6} {:>12.6} {:>12.6}",
            row.index, row.max_contraction_norm, row.max_covariance, row.moment_gap
        );
    }
    println!("sup E|F|^2 per sequence: {:?}", table.sup_second_moments);
    Ok(())
}
