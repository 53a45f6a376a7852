//! `symqent`: analysis of pure symmetric N-qubit states from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symqent::Error;

/// Environment variable overriding the default MES and anticoherence tolerances.
pub const TOL_ENV: &str = "SYMQENT_TOL";

#[derive(Parser, Debug)]
#[command(name = "symqent", version, about = "Symmetric multiqubit state analysis")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Tolerance of the MES test (default 1e-10, or $SYMQENT_TOL).
    #[arg(long, global = true)]
    pub mes_tol: Option<f64>,

    /// Tolerance of the anticoherence test (default 1e-9, or $SYMQENT_TOL).
    #[arg(long, global = true)]
    pub anticoh_tol: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// MES verdict, anticoherence order, spin expectation, Husimi moments, Majorana configuration.
    Analyze { file: PathBuf },
    /// t-qubit reduced density matrix.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Husimi function on a (theta, phi) grid as CSV.
    Husimi {
        file: PathBuf,
        #[arg(long, default_value_t = 91)]
        ntheta: usize,
        #[arg(long, default_value_t = 180)]
        nphi: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Majorana points and degeneracy configuration.
    Majorana { file: PathBuf },
    /// 4-qubit SLOCC normal form psi_mu with mu in S.
    Canonicalize4 { file: PathBuf },
    /// Geometric and barycentric measures, N-tangle, MES and anticoherence.
    Measures { file: PathBuf },
    /// Emit a catalog state as a state file.
    Catalog {
        name: String,
        #[arg(long)]
        n: usize,
        /// Complex parameter `re,im` (or `re`); repeatable.
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Run the oracle and invariant suites.
    Verify {
        #[arg(long, default_value_t = 2)]
        nmin: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random states per qubit number.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Report still printed to stdout, e.g. a failing verify summary.
    pub stdout: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            stdout: String::new(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidState(_)
            | Error::DimensionMismatch { .. }
            | Error::SizeLimitExceeded { .. }
            | Error::SingularOperator { .. }
            | Error::UnknownState(_)
            | Error::InvalidParameter(_) => 2,
            Error::NumericalFailure(_) | Error::CanonicalizationFailure(_) => 3,
            Error::NotGenericState(_) | Error::NotCovered(_) | Error::Unsupported(_) => 4,
        };
        let name = match e {
            Error::NotGenericState(_) => "NotGenericState: ",
            _ => "",
        };
        Failure {
            code,
            message: format!("{name}{e}"),
            stdout: String::new(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = commands::Runner::new(cli.run).and_then(|r| match cli.command {
        Command::Analyze { file } => r.analyze(&file),
        Command::Reduce { file, t } => r.reduce(&file, t),
        Command::Husimi {
            file,
            ntheta,
            nphi,
            out,
        } => r.husimi(&file, ntheta, nphi, out.as_deref()),
        Command::Majorana { file } => r.majorana(&file),
        Command::Canonicalize4 { file } => r.canonicalize4(&file),
        Command::Measures { file } => r.measures(&file),
        Command::Catalog { name, n, params } => r.catalog(&name, n, &params),
        Command::Verify {
            nmin,
            nmax,
            seed,
            samples,
            inject_fault,
        } => r.verify(nmin, nmax, seed, samples, inject_fault),
    });
    match out {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if !f.stdout.is_empty() {
                println!("{}", f.stdout);
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
