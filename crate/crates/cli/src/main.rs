mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit codes: 1 verify violations or internal failure, 2 parse error, 3 dimension
/// above the cap, 4 invalid construct parameters, 5 evolve precondition failure.
#[derive(Parser, Debug)]
#[command(name = "cpmaps", version, about = "Positive maps on matrix spaces: classification, spectra, dynamics")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args, Debug, Clone)]
pub struct Shared {
    /// Seed for every randomized check; repeat or comma-separate for several.
    #[arg(long, global = true, value_delimiter = ',')]
    seed: Vec<u64>,
    /// Overrides every numerical tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classification and spectral report for a channel file.
    Analyze {
        channel: PathBuf,
        /// Random trials per refutation search.
        #[arg(long, default_value_t = cpmaps::positivity::DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Emit a channel file.
    Construct {
        #[command(subcommand)]
        kind: commands::Construct,
    },
    /// Spectrum, invariant state and peripheral modes of a channel file.
    Spectrum { channel: PathBuf },
    /// Trajectory of a matrix under the channel or its semigroup.
    Evolve {
        #[command(subcommand)]
        mode: commands::Evolve,
    },
    /// Randomized inequality suite.
    Verify(commands::VerifyArgs),
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DIMENSION: u8 = 3;
pub const EXIT_CONSTRUCT: u8 = 4;
pub const EXIT_EVOLVE: u8 = 5;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { channel, trials } => commands::analyze(&channel, trials, &cli.shared),
        Command::Construct { kind } => commands::construct(kind, &cli.shared),
        Command::Spectrum { channel } => commands::spectrum(&channel, &cli.shared),
        Command::Evolve { mode } => commands::evolve(mode, &cli.shared),
        Command::Verify(args) => commands::verify(args, &cli.shared),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("cpmaps: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
