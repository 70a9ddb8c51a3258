//! `somp`: joint sparse recovery and restricted-isometry certification
//! from the command line.
//!
//! Exit codes are a stable contract:
//! 0 success, 1 input error, 2 recovery inexact against a supplied truth
//! support, 3 enumeration budget exceeded, 4 soundness violation (a trial
//! where a recovery criterion held yet recovery failed).

mod matfile;

use clap::{Parser, Subcommand};
use somp_core::certify::CertifyError;
use somp_core::harness::{
    boundary_probe_budgeted, run_campaign_budgeted, write_campaign_csv, HarnessError, TrialConfig,
};
use somp_core::pursuit::somp;
use somp_core::tolerances::DEFAULT_ENUMERATION_BUDGET;
use somp_core::{
    erc_evaluate_detailed, ric_exact_budgeted, roc_exact_budgeted, roc_one_exact, SupportSet,
};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "somp",
    version,
    about = "Joint sparse recovery with exact restricted-isometry certification"
)]
struct Cli {
    /// Override the seed of a campaign or probe configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also write a per-trial CSV (campaign only).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Enumeration budget: the largest support count a certification call
    /// may visit. Overrides the SOMP_CERT_BUDGET environment variable.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover a joint support from measurements Y against dictionary Phi.
    Recover {
        /// Dictionary matrix file (CSV or whitespace text).
        #[arg(long)]
        phi: PathBuf,
        /// Measurement matrix file, one column per measurement vector.
        #[arg(long)]
        y: PathBuf,
        /// Number of atoms to select.
        #[arg(short, long)]
        sparsity: usize,
        /// True support as comma-separated 0-based column indices; enables
        /// per-iteration instrumentation and the inexact-recovery exit code.
        #[arg(long, value_delimiter = ',')]
        truth: Option<Vec<usize>>,
    },
    /// Evaluate every recovery criterion for a dictionary at sparsity s.
    Certify {
        #[arg(long)]
        phi: PathBuf,
        #[arg(short, long)]
        sparsity: usize,
    },
    /// Exact restricted-isometry constant of one order, with witness.
    Ric {
        #[arg(long)]
        phi: PathBuf,
        /// Support size whose worst Gram block is sought.
        #[arg(short, long)]
        order: usize,
    },
    /// Exact restricted-orthogonality constant for disjoint support sizes.
    /// `--alpha 1` uses the closed form over single atoms.
    Roc {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        alpha_prime: usize,
    },
    /// Run a Monte-Carlo campaign described by a JSON configuration.
    Campaign {
        #[arg(long)]
        config: PathBuf,
    },
    /// Blend a dictionary toward rank deficiency and record how the
    /// criteria and recovery degrade.
    Probe {
        #[arg(long)]
        config: PathBuf,
        /// Number of blend steps from 0 (unperturbed) to 1 (collapsed).
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
}

enum CliError {
    Input(String),
    Budget(String),
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Budget(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<matfile::MatrixFileError> for CliError {
    fn from(e: matfile::MatrixFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Certify(CertifyError::BudgetExceeded { .. }) => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(budget) = flag {
        return Ok(budget);
    }
    match std::env::var("SOMP_CERT_BUDGET") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::input(format!(
                "SOMP_CERT_BUDGET must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_ENUMERATION_BUDGET),
        Err(e) => Err(CliError::input(format!("SOMP_CERT_BUDGET: {e}"))),
    }
}

fn emit(output: &Option<PathBuf>, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::input(format!("serializing report: {e}")))?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(path: &PathBuf, seed_override: Option<u64>) -> Result<TrialConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut config: TrialConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let budget = resolve_budget(cli.budget)?;
    match cli.command {
        Command::Recover {
            phi,
            y,
            sparsity,
            truth,
        } => {
            let dictionary = matfile::read_matrix(&phi)?;
            let measurements = matfile::read_matrix(&y)?;
            let truth_set = truth
                .map(SupportSet::new)
                .transpose()
                .map_err(|e| CliError::input(format!("--truth: {e}")))?;
            let trace = somp(&dictionary, &measurements, sparsity, truth_set.as_ref())
                .map_err(|e| CliError::input(e.to_string()))?;
            emit(&cli.output, &trace)?;
            if truth_set.is_some() && trace.exact_recovery == Some(false) {
                Ok(2)
            } else {
                Ok(0)
            }
        }
        Command::Certify { phi, sparsity } => {
            let dictionary = matfile::read_matrix(&phi)?;
            let evaluation = erc_evaluate_detailed(&dictionary, sparsity, budget)?;
            emit(&cli.output, &evaluation)?;
            Ok(0)
        }
        Command::Ric { phi, order } => {
            let dictionary = matfile::read_matrix(&phi)?;
            let certificate = ric_exact_budgeted(&dictionary, order, budget)?;
            emit(&cli.output, &certificate)?;
            Ok(0)
        }
        Command::Roc {
            phi,
            alpha,
            alpha_prime,
        } => {
            let dictionary = matfile::read_matrix(&phi)?;
            let certificate = if alpha == 1 {
                roc_one_exact(&dictionary, alpha_prime)?
            } else {
                roc_exact_budgeted(&dictionary, alpha, alpha_prime, budget)?
            };
            emit(&cli.output, &certificate)?;
            Ok(0)
        }
        Command::Campaign { config } => {
            let config = load_config(&config, cli.seed)?;
            let report = run_campaign_budgeted(&config, budget)?;
            if let Some(csv_path) = &cli.csv {
                let mut file = fs::File::create(csv_path)
                    .map_err(|e| CliError::input(format!("{}: {e}", csv_path.display())))?;
                write_campaign_csv(&report, &mut file)
                    .map_err(|e| CliError::input(format!("{}: {e}", csv_path.display())))?;
            }
            emit(&cli.output, &report)?;
            eprintln!(
                "campaign: {} trials in {:.2} s, recovery rate {:.4}",
                report.aggregates.trials,
                report.wall_time_seconds,
                report.aggregates.recovery_rate
            );
            if report.aggregates.erc_true_but_failed > 0 {
                eprintln!(
                    "soundness violation: {} trial(s) satisfied a recovery criterion but failed",
                    report.aggregates.erc_true_but_failed
                );
                Ok(4)
            } else {
                Ok(0)
            }
        }
        Command::Probe { config, steps } => {
            let config = load_config(&config, cli.seed)?;
            let report = boundary_probe_budgeted(&config, steps, budget)?;
            emit(&cli.output, &report)?;
            let unsound = report.failures_with_some_erc_true > 0
                || report.replicated_equivalence_failures > 0;
            if unsound {
                eprintln!(
                    "soundness violation: {} failure(s) with a criterion true, {} replicated-equivalence mismatch(es)",
                    report.failures_with_some_erc_true, report.replicated_equivalence_failures
                );
                Ok(4)
            } else {
                Ok(0)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
