//! Command-line front end; `main` is a thin wrapper around [`main_with_args`].

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commands::{self, CorrectabilityInput};
use crate::json::to_json_string;
use crate::{exit_code, CliError, CliResult, ExperimentRecord, RunOptions, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "qchan", version, about = "Random-unitary channel experiments and checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Pass/fail tolerance (defaults to QCHAN_TOL, then 1e-10)
    #[arg(long, env = "QCHAN_TOL")]
    tol: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Run {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock runtime in the summary (output no longer reproducible)
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Depolarization: direct formula against the RU maximal-mixing pipeline
    Fig1(Run),
    /// Ornstein-Uhlenbeck channel against its RU-converted Kraus set (n is fixed at 4)
    Fig2(Run),
    /// State-dependent RU decomposition of random (pure, mixed) pairs
    Fig3(Run),
    /// Emit the full RU Kraus set for n levels
    BuildRu {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Certify that the RU basis selection spans all n x n matrices
    CheckHs {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Correctability conditions for an error set and code projector
    CheckCorrectability {
        #[arg(long, requires = "projector", conflicts_with = "fixtures")]
        errors: Option<PathBuf>,
        #[arg(long, requires = "errors")]
        projector: Option<PathBuf>,
        /// Run every built-in fixture and cross-check each verdict
        #[arg(long)]
        fixtures: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Convert a Kraus set into the RU-derived form
    Convert {
        #[arg(long)]
        input: PathBuf,
        /// Expansion basis as a Kraus-set file (default: RU HS basis)
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Bit-flip code recovery against random bit-flip channels, with a phase-flip control
    RecoverDemo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Universal-recovery conditions (default: bit-flip fixture)
    CheckUniversal {
        #[arg(long)]
        errors: Option<PathBuf>,
        #[arg(long)]
        code: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// State-dependent RU decomposition of one (pure, mixed) pair
    StateRu {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long)]
        rho: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report<R: Serialize>(r: &R, passed: bool, common: &Common) -> CliResult<i32> {
    if common.format == Format::Csv {
        return Err(CliError::Usage("--format csv is only available for fig1, fig2 and fig3".into()));
    }
    emit(&to_json_string(r), common.out.as_deref())?;
    Ok(exit_code(passed))
}

fn experiment(rec: ExperimentRecord, common: &Common) -> CliResult<i32> {
    let text = match common.format {
        Format::Json => to_json_string(&rec),
        Format::Csv => rec.to_csv(),
    };
    emit(&text, common.out.as_deref())?;
    Ok(exit_code(rec.summary.passed))
}

fn run_options(r: &Run) -> RunOptions {
    RunOptions {
        samples: r.samples,
        seed: r.seed,
        tol: r.common.tol.unwrap_or(DEFAULT_TOL),
        timing: r.timing,
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Fig1(r) => experiment(crate::cmd_fig1(r.n, run_options(&r))?, &r.common),
        Command::Fig2(r) => experiment(crate::cmd_fig2(run_options(&r))?, &r.common),
        Command::Fig3(r) => experiment(crate::cmd_fig3(r.n, run_options(&r))?, &r.common),
        Command::BuildRu { n, common } => {
            let r = commands::build_ru(n, common.tol.unwrap_or(DEFAULT_TOL))?;
            report(&r, r.passed, &common)
        }
        Command::CheckHs { n, common } => {
            let r = commands::check_hs(n)?;
            report(&r, r.passed, &common)
        }
        Command::CheckCorrectability {
            errors,
            projector,
            fixtures,
            common,
        } => {
            let input = match (errors.as_deref(), projector.as_deref(), fixtures) {
                (Some(errors), Some(projector), false) => CorrectabilityInput::Files { errors, projector },
                (None, None, true) => CorrectabilityInput::Fixtures,
                _ => return Err(CliError::Usage("give --errors and --projector, or --fixtures".into())),
            };
            let r = commands::check_correctability(input, common.tol)?;
            report(&r, r.passed, &common)
        }
        Command::Convert { input, basis, common } => {
            let r = commands::convert_file(&input, basis.as_deref(), common.tol.unwrap_or(DEFAULT_TOL))?;
            report(&r, r.passed, &common)
        }
        Command::RecoverDemo { seed, samples, common } => {
            let r = commands::recover_demo(seed, samples, common.tol.unwrap_or(DEFAULT_TOL))?;
            report(&r, r.passed, &common)
        }
        Command::CheckUniversal { errors, code, common } => {
            let r = commands::check_universal(errors.as_deref(), code.as_deref())?;
            report(&r, r.passed, &common)
        }
        Command::StateRu {
            n,
            seed,
            psi,
            rho,
            common,
        } => {
            let r = commands::state_ru(n, seed, psi.as_deref(), rho.as_deref(), common.tol.unwrap_or(DEFAULT_TOL))?;
            report(&r, r.passed, &common)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 all checks passed, 1 a check failed, 2 input error.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
