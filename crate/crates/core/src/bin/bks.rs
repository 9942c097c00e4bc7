use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bks_core::harness::{self, ExperimentConfig, HarnessError, Mode, OutputFormat, Verdict};

#[derive(Parser, Debug)]
#[command(
    name = "bks",
    version,
    about = "Hidden-variable vs. quantum predictions for the two-qubit four-proposition test"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every sampling-free invariant check.
    Verify,
    /// Print the 16 hidden-variable assignments with their proposition values.
    NchvTable {
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Born probabilities of P1..P4 for a state.
    QmProbs {
        /// preset:<name> | amps:<re,im;re,im;re,im;re,im> | random:<seed>
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a shot-by-shot joint measurement experiment.
    Simulate {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "joint")]
        mode: Mode,
        /// Four distinct eigenvalues for maximal mode, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<f64>>,
        /// Measurement order for sequential mode, e.g. 4,3,2,1.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Probability of replacing a shot's outcome with a uniform draw.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), HarnessError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Verify => {
            let report = harness::run_verify();
            print!("{report}");
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::NchvTable { format, out } => {
            emit(&harness::run_nchv_table(format), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::QmProbs { state, format, out } => {
            emit(&harness::run_qm_probs(&state, format)?, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            state,
            shots,
            seed,
            mode,
            coeffs,
            order,
            noise,
            format,
            out,
        } => {
            let mut config = ExperimentConfig::new(state, shots, seed).with_mode(mode);
            if let Some(c) = coeffs {
                config.coefficients = c.try_into().map_err(|_| {
                    HarnessError::InvalidConfig("--coeffs takes exactly four values".into())
                })?;
            }
            if let Some(o) = order {
                config.order = o.try_into().map_err(|_| {
                    HarnessError::InvalidConfig("--order takes exactly four values".into())
                })?;
            }
            config.noise_p = noise;
            config.output_format = format;
            config.output_path = out;
            let report = harness::run_experiment(&config)?;
            emit(
                &harness::render_report(&report, config.output_format),
                config.output_path.as_ref(),
            )?;
            eprint!("{}", harness::summary_text(&report));
            Ok(if report.verdict == Verdict::QM {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
