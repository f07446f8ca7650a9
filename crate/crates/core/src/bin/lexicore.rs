//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 instance
//! or input validation error, 3 internal invariant violation.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lexicore::classify::classify;
use lexicore::game::{AssignmentGame, Imputation};
use lexicore::mechanism::{self, MechanismError, RunOptions};
use lexicore::oracle;
use lexicore::profile::Mode;
use lexicore::report::{self, Format};
use lexicore::solutions::{check_core, extreme_imputations};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lexicore", version, about = "Assignment-game core solver")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Json)]
    format: CliFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Leximin,
    Leximax,
}

impl From<Objective> for Mode {
    fn from(o: Objective) -> Mode {
        match o {
            Objective::Leximin => Mode::Leximin,
            Objective::Leximax => Mode::Leximax,
        }
    }
}

#[derive(Args)]
struct InstanceArg {
    /// Instance JSON file, or `-` for stdin
    instance: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the leximin or leximax core imputation
    Solve {
        #[arg(long, value_enum)]
        objective: Objective,
        /// Cross-check the result against the brute-force oracle when the
        /// instance is within oracle guards
        #[arg(long)]
        verify: bool,
        /// Start from this core imputation instead of the solver's own dual
        #[arg(long)]
        initial: Option<PathBuf>,
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Print the event log of a run, one JSON object per line
    Trace {
        #[arg(long, value_enum)]
        objective: Objective,
        /// Include the imputation after each event
        #[arg(long)]
        snapshots: bool,
        #[arg(long)]
        initial: Option<PathBuf>,
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Label vertices and edges essential / viable / subpar
    Classify {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Compute the U-optimal and V-optimal core imputations
    Extremes {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Check whether an imputation lies in the core
    Check {
        /// Imputation JSON file: {"u": [...], "v": [...]}
        #[arg(long)]
        imputation: PathBuf,
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Brute-force reference answer (guarded to desk-scale instances)
    Oracle {
        #[arg(long, value_enum)]
        objective: Objective,
        #[command(flatten)]
        instance: InstanceArg,
    },
}

enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<MechanismError> for CliError {
    fn from(e: MechanismError) -> Self {
        match e {
            MechanismError::NotACoreImputation | MechanismError::DimensionMismatch => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Validation(format!("cannot read stdin: {}", e)))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {}", path, e)))
    }
}

fn load_game(arg: &InstanceArg) -> Result<AssignmentGame, CliError> {
    let text = read_input(&arg.instance)?;
    AssignmentGame::parse(&text).map_err(|e| CliError::Validation(e.to_string()))
}

fn load_imputation(path: &Path) -> Result<Imputation, CliError> {
    let text = read_input(&path.display().to_string())?;
    Imputation::parse(&text).map_err(|e| CliError::Validation(e.to_string()))
}

fn run_solve(
    game: &AssignmentGame,
    mode: Mode,
    initial: Option<Imputation>,
    verify: bool,
    snapshots: bool,
) -> Result<(Imputation, mechanism::Trace), CliError> {
    let options = RunOptions { snapshots };
    let (imputation, trace) = mechanism::run_with_options(game, mode, initial, options)?;
    if verify {
        let reference = match mode {
            Mode::Leximin => oracle::oracle_leximin(game),
            Mode::Leximax => oracle::oracle_leximax(game),
        };
        match reference {
            Ok(expected) => {
                if expected != imputation {
                    return Err(CliError::Internal(format!(
                        "oracle disagrees: mechanism {} vs oracle {}",
                        imputation.to_json(),
                        expected.to_json()
                    )));
                }
            }
            Err(oracle::OracleError::GuardExceeded(why)) => {
                eprintln!("warning: --verify ignored, {}", why);
            }
            Err(e) => return Err(CliError::Internal(e.to_string())),
        }
    }
    Ok((imputation, trace))
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    let format = match cli.format {
        CliFormat::Json => Format::Json,
        CliFormat::Table => Format::Table,
    };
    match cli.command {
        Command::Solve {
            objective,
            verify,
            initial,
            instance,
        } => {
            let game = load_game(&instance)?;
            let initial = initial.as_deref().map(load_imputation).transpose()?;
            let mode = objective.into();
            let (imputation, _) = run_solve(&game, mode, initial, verify, false)?;
            let classification = classify(&game);
            let report = report::solve_report(&classification, imputation, mode);
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(&game),
            })
        }
        Command::Trace {
            objective,
            snapshots,
            initial,
            instance,
        } => {
            let game = load_game(&instance)?;
            let initial = initial.as_deref().map(load_imputation).transpose()?;
            let (_, trace) = run_solve(&game, objective.into(), initial, false, snapshots)?;
            Ok(report::trace_to_jsonl(&trace).trim_end().to_string())
        }
        Command::Classify { instance } => {
            let game = load_game(&instance)?;
            let classification = classify(&game);
            let report = report::ClassifyReport::new(&game, &classification);
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(&game),
            })
        }
        Command::Extremes { instance } => {
            let game = load_game(&instance)?;
            let (u_optimal, v_optimal) = extreme_imputations(&game);
            let report = report::ExtremesReport {
                u_optimal,
                v_optimal,
            };
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(&game),
            })
        }
        Command::Check {
            imputation,
            instance,
        } => {
            let game = load_game(&instance)?;
            let imputation = load_imputation(&imputation)?;
            let report =
                check_core(&game, &imputation).map_err(|e| CliError::Validation(e.to_string()))?;
            Ok(match format {
                Format::Json => report::check_report_to_json(&report),
                Format::Table => report::check_report_to_table(&report),
            })
        }
        Command::Oracle {
            objective,
            instance,
        } => {
            let game = load_game(&instance)?;
            let mode: Mode = objective.into();
            let result = match mode {
                Mode::Leximin => oracle::oracle_leximin(&game),
                Mode::Leximax => oracle::oracle_leximax(&game),
            };
            let imputation = result.map_err(|e| match e {
                oracle::OracleError::GuardExceeded(_) => CliError::Validation(e.to_string()),
                oracle::OracleError::Internal(_) => CliError::Internal(e.to_string()),
            })?;
            let classification = classify(&game);
            let report = report::solve_report(&classification, imputation, mode);
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(&game),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(output) => {
            println!("{}", output);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
