use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use seqbell_cli::commands::{self, CommandError, IncompatArgs, IncompatMode};
use seqbell_cli::output::emit;
use seqbell_cli::resolve_threads;

/// Sequential Bell experiments with unsharp instruments: bounds, chain
/// simulation, self-testing and incompatibility degrees.
#[derive(Parser)]
#[command(name = "seqbell", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the local, noncontextual and see-saw quantum bounds as JSON.
    Bounds {
        /// Seed for the see-saw restarts.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a sequential scenario file.
    Chain {
        /// Scenario JSON file.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the sharpness grid of a canonical chain and emit CSV.
    Sweep {
        /// Grid step for each sharpness axis.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Worker threads (falls back to SEQBELL_THREADS, then 1).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invert an observed Bell tuple into sharpness parameters.
    Certify {
        #[arg(long)]
        i1: f64,
        #[arg(long)]
        i2: f64,
        #[arg(long)]
        i3: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the trade-off surface between the three sequential values.
    Surface {
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degrees of incompatibility: reference values, sequential bounds, or
    /// the CHSH baseline.
    Incompat {
        #[arg(long, value_enum)]
        mode: IncompatMode,
        /// Sharpness of the first observer (chsh mode; verdict probe for
        /// triple/trine modes).
        #[arg(long)]
        eta1: Option<f64>,
        /// Sharpness of the second observer (chsh mode).
        #[arg(long)]
        eta2: Option<f64>,
        /// Fixed sharpness of the third observer (sequential mode).
        #[arg(long, default_value_t = 1.0)]
        eta3: f64,
        /// Grid step (sequential mode).
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        /// Observed tuple (sequential mode); defaults to the
        /// equal-incompatibility tuple at eta3.
        #[arg(long)]
        i1: Option<f64>,
        #[arg(long)]
        i2: Option<f64>,
        #[arg(long)]
        i3: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operator-condition residuals for a chain scenario.
    Verify {
        /// Scenario JSON file; the canonical chain at --eta1/2/3 when
        /// omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 20.0 / 29.0)]
        eta1: f64,
        #[arg(long, default_value_t = 0.8)]
        eta2: f64,
        #[arg(long, default_value_t = 1.0)]
        eta3: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every reference value and print the pass/fail table.
    Reproduce {
        /// Override the pinned tolerance of the approximate checks.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Seed for randomized checks (see-saw, random channel inputs).
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Also write the rows as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CommandError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CommandError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CommandError> {
    let write = |out: Option<PathBuf>, content: String| -> Result<ExitCode, CommandError> {
        emit(out.as_deref(), &content)
            .map_err(|e| CommandError::Failure(format!("write failed: {e}")))?;
        Ok(ExitCode::SUCCESS)
    };

    match cli.command {
        Command::Bounds { seed, out } => write(out, commands::bounds(seed)?),
        Command::Chain { config, out } => write(out, commands::chain(&config)?),
        Command::Sweep { step, threads, out } => {
            write(out, commands::sweep(step, resolve_threads(threads))?)
        }
        Command::Certify { i1, i2, i3, out } => write(out, commands::certify(i1, i2, i3)?),
        Command::Surface { step, out } => write(out, commands::surface(step)?),
        Command::Incompat {
            mode,
            eta1,
            eta2,
            eta3,
            step,
            i1,
            i2,
            i3,
            out,
        } => {
            let tuple = match (i1, i2, i3) {
                (Some(a), Some(b), Some(c)) => Some((a, b, c)),
                (None, None, None) => None,
                _ => {
                    return Err(CommandError::Usage(
                        "an observed tuple needs all of --i1, --i2, --i3".into(),
                    ))
                }
            };
            let args = IncompatArgs {
                eta1,
                eta2,
                eta3,
                step,
                tuple,
            };
            write(out, commands::incompat(mode, &args)?)
        }
        Command::Verify {
            config,
            eta1,
            eta2,
            eta3,
            out,
        } => write(
            out,
            commands::verify(config.as_deref(), [eta1, eta2, eta3])?,
        ),
        Command::Reproduce {
            tolerance,
            seed,
            out,
        } => {
            let outcome = commands::reproduce(tolerance, seed)?;
            print!("{}", outcome.table);
            if let Some(path) = out {
                emit(Some(&path), &outcome.json)
                    .map_err(|e| CommandError::Failure(format!("write failed: {e}")))?;
            }
            Ok(if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
