//! Runs a scenario file through the library entry point and prints a
//! one-line summary per check.
//!
//! ```bash
//! cargo run --release --example run_scenario -- scenarios/disjoint_pair.json
//! ```

use std::path::PathBuf;

use complex_chaos::cli::{run_file, RunOptions};

fn main() {
    let path: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/disjoint_pair.json").into())
        .into();
    match run_file(&path, &RunOptions::default()) {
        Ok(report) => {
            for c in &report.body.checks {
                println!(
                    "{:<24} {:<5} residual {:e}",
                    c.name,
                    if c.report.pass { "PASS" } else { "FAIL" },
                    c.report.residual
                );
            }
            std::process::exit(report.exit_code());
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            std::process::exit(2);
        }
    }
}
