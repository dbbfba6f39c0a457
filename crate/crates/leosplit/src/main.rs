use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use leosplit::config::{parse_solve_config, parse_sweep_config};
use leosplit::report::{run_solve, run_sweep, run_verify, ReportScale, RunError, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "leosplit",
    version,
    about = "Satellite-ground DNN inference offloading: cost model, split solver, experiment sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one offloading instance from a config file
    Solve {
        /// Config with an inline scenario or a [sample] block
        #[arg(long)]
        config: PathBuf,
        /// Override the [sample] seed (ignored for inline scenarios)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate ILPB, ARG and ARS over a sweep and write a CSV
    Sweep {
        /// Config with a [sweep] block and optional [ranges]
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; a .meta.json sidecar is written next to it
        #[arg(long)]
        out: PathBuf,
        /// Override the sweep seed
        #[arg(long)]
        seed: Option<u64>,
        /// Append log10 latency/energy columns to the CSV
        #[arg(long)]
        log10: bool,
    },
    /// Cross-check the solver against exhaustive enumeration on seeded instances
    Verify {
        /// Number of random instances to check
        #[arg(long)]
        instances: usize,
        /// Layer counts are drawn from 1..=k-max
        #[arg(long, default_value_t = 24)]
        k_max: usize,
        /// Master seed for instance generation
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, RunError> {
    match cli.command {
        Command::Solve { config, seed } => {
            let text = fs::read_to_string(&config)?;
            let parsed = parse_solve_config(&text)?;
            let report = run_solve(&parsed, seed)?;
            println!("{report}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            out,
            seed,
            log10,
        } => {
            let text = fs::read_to_string(&config)?;
            let parsed = parse_sweep_config(&text)?;
            let scale = if log10 {
                ReportScale::Log10
            } else {
                ReportScale::Raw
            };
            let outcome = run_sweep(&parsed, &out, scale, seed)?;
            print!("{}", outcome.summary);
            println!("wrote {} rows to {}", outcome.rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            instances,
            k_max,
            seed,
        } => {
            if instances == 0 {
                println!("warning: 0 instances requested; vacuous pass");
                return Ok(ExitCode::SUCCESS);
            }
            let outcome = run_verify(&VerifyConfig {
                instances,
                k_max,
                seed,
            })?;
            println!("{outcome}");
            Ok(if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
