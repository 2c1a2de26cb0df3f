use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use index_defect_cli::config::parse_config;
use index_defect_cli::run::{run_scenario, Settings};
use index_defect_cli::suite::run_suite;
use index_defect_cli::CliError;

const NORMALIZATION: &str = "\
Normalization: the circle is scaled so lattice spacing is 1. A tangential
eigenvalue written tau + 2*pi*n on the circle of length 2*pi corresponds to
the lattice value (tau / (2*pi)) + n here. So the parameter intervals
(-2*pi, 0), {0}, (0, 2*pi) correspond to tau in (-1, 0), {0}, (0, 1).

Exit codes: 0 success, 1 failed acceptance checks, 2 invalid input,
3 numerical error (the error name is printed).";

#[derive(Parser)]
#[command(name = "index-defect", version, about = "Spectral flow, eta invariants and index defects on model operators", after_help = NORMALIZATION)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario from a config file and emit CSV.
    #[command(after_help = NORMALIZATION)]
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scenario: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        mode_window: usize,
        #[arg(long, default_value_t = 1e-6)]
        gap_tol: f64,
        #[arg(long, default_value_t = 1e-9)]
        kernel_tol: f64,
    },
    /// Run an acceptance group: eta, sf, zeta, seeley, aps, defect or all.
    Suite { name: String },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, scenario, out, mode_window, gap_tol, kernel_tol } => {
            let settings = Settings { mode_window, gap_tol, kernel_tol };
            settings.validate()?;
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
            let config = parse_config(&text)?;
            let table = run_scenario(&config, &scenario, &settings)?;
            match out {
                Some(path) => {
                    let f = File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    table.write_csv(BufWriter::new(f))
                }
                None => table.write_csv(io::stdout().lock()),
            }
        }
        Command::Suite { name } => {
            let results = run_suite(&name)?;
            let mut stdout = io::stdout().lock();
            for r in &results {
                writeln!(stdout, "{}", r.line()).map_err(|e| CliError::Io(e.to_string()))?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(CliError::SuiteFailed(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
