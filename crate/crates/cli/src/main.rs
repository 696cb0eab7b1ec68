mod bench;
mod decompose;
mod eval;
mod manifest;

use clap::{Parser, Subcommand};

/// Group-sparse rank-one SVD toolkit.
///
/// Decomposes a feature-by-sample matrix into sparse rank-one factors where
/// each singular vector can carry an element-wise, group, or
/// overlapping-group penalty; runs the synthetic recovery benchmark; and
/// scores stored decompositions against a known support.
#[derive(Parser, Debug)]
#[command(name = "gsvd", version, about, max_term_width = 100)]
struct Cli {
    /// Cap the worker thread pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Omit timestamps and wall-clock timings from all outputs so repeated
    /// runs produce byte-identical files.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit penalized rank-one factors to a matrix file.
    Decompose(decompose::DecomposeArgs),
    /// Run the synthetic group-recovery benchmark.
    SimulateBench(bench::BenchArgs),
    /// Compare a stored decomposition's u-support against a truth file.
    Eval(eval::EvalArgs),
}

/// Error carrying the process exit code: 2 usage, 3 data, 4 degeneracy.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Degenerate(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Degenerate(m) => m,
        }
    }
}

impl From<gsvd::Error> for CliError {
    fn from(e: gsvd::Error) -> Self {
        if e.is_degenerate() {
            CliError::Degenerate(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // a failure here only means a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    let result = match &cli.command {
        Command::Decompose(args) => decompose::run(args, cli.no_timestamp),
        Command::SimulateBench(args) => bench::run(args, cli.no_timestamp),
        Command::Eval(args) => eval::run(args, cli.no_timestamp),
    };
    match result {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::ExitCode::from(e.exit_code())
        }
    }
}
