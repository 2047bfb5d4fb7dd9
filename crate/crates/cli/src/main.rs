use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phfluid_cli::commands::{self, cmd_report, cmd_simulate, cmd_verify};

#[derive(Parser)]
#[command(name = "phfluid", version, about = "Port-Hamiltonian ideal-fluid kinetic-energy model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite and write verify.json.
    Verify {
        config: PathBuf,
        /// Comma-separated grid resolutions, overriding the config.
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<usize>>,
        #[arg(long, default_value = "verify-out")]
        out: PathBuf,
    },
    /// Integrate a configured run and write manifest, energy table and snapshots.
    Simulate {
        config: PathBuf,
        #[arg(long, default_value = "run")]
        out: PathBuf,
    },
    /// Summarize a finished run directory into report.json and series.csv.
    Report { run_dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Verify { config, resolutions, out } => cmd_verify(config, resolutions.clone(), out),
        Command::Simulate { config, out } => cmd_simulate(config, out),
        Command::Report { run_dir } => cmd_report(run_dir),
    };
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    ExitCode::from(commands::exit_code(&outcome) as u8)
}
