use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use complex_chaos::cli::{self, ErrorKind, InputError, Report, RunOptions, EXIT_INPUT};
use complex_chaos::kernels::{Caps, MAX_CELLS, MAX_ORDER};

/// Certifies complex multiple Wiener-Ito integral identities.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run every certification suite at acceptance size.
    Selftest {
        #[command(flatten)]
        flags: Flags,
        /// Add this to the first weight of every product expansion.
        #[arg(long, hide = true, default_value_t = 0.0)]
        inject_perturbation: f64,
    },
    /// Complex Hermite polynomials.
    Hermite {
        #[command(subcommand)]
        command: HermiteCommand,
    },
}

#[derive(Subcommand)]
enum HermiteCommand {
    /// Print J_{m,n}(z, 1) for m + n <= max.
    Table {
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the product identity for a + b + c + d <= max.
    ProductCheck {
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Tolerance for relative identities when a check sets none.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = MAX_ORDER)]
    max_order: usize,
    #[arg(long, default_value_t = MAX_CELLS)]
    max_cells: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run only these checks (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

impl Flags {
    fn options(&self) -> Result<RunOptions, InputError> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(InputError::new(
                ErrorKind::Validation,
                format!("invalid --tol {}", self.tol),
            ));
        }
        let caps =
            Caps::new(self.max_order, self.max_cells).map_err(|e| InputError::new(ErrorKind::Cap, e.to_string()))?;
        Ok(RunOptions {
            tolerance: self.tol,
            seed: self.seed,
            samples: self.samples,
            caps,
            only: self.only.clone(),
        })
    }
}

fn write(text: &str, out: Option<&PathBuf>) -> Result<(), InputError> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| InputError::new(ErrorKind::Io, format!("{}: {e}", path.display()))),
        None => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn emit(report: Result<Report, InputError>, out: Option<&PathBuf>) -> Result<i32, InputError> {
    let report = report?;
    write(&report.to_json(), out)?;
    Ok(report.exit_code())
}

fn dispatch(cli: Cli) -> Result<i32, InputError> {
    match cli.command {
        Command::Run { scenario, flags } => emit(cli::run_file(&scenario, &flags.options()?), flags.out.as_ref()),
        Command::Selftest {
            flags,
            inject_perturbation,
        } => emit(
            cli::selftest(&flags.options()?, inject_perturbation),
            flags.out.as_ref(),
        ),
        Command::Hermite { command } => match command {
            HermiteCommand::Table { max, out } => {
                let rows = cli::hermite_table(max)?;
                write(
                    &serde_json::to_string_pretty(&rows).expect("table serializes"),
                    out.as_ref(),
                )?;
                Ok(0)
            }
            HermiteCommand::ProductCheck { max, flags } => {
                emit(cli::hermite_product_report(max, &flags.options()?), flags.out.as_ref())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
