mod bench;
mod detect;
mod error;
mod fuzz;
mod gen;
mod input;
mod oracle;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;
use output::Output;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "permstream", version)]
#[command(
    about = "One-pass detection of permutation patterns, with oracle, generators and benchmarks"
)]
struct Cli {
    /// Output format; json reports carry "schema": 1
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "PERMSTREAM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the dispatched detector on one or more streams
    Detect(detect::Args),
    /// Decide containment by brute force
    Oracle(oracle::Args),
    /// Write a hard instance as a stream file
    Gen(gen::Args),
    /// Compare detector and oracle on many inputs
    Fuzz(fuzz::Args),
    /// Measure peak space on random and adversarial inputs
    Bench(bench::Args),
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Detect(args) => detect::run(args),
        Command::Oracle(args) => oracle::run(args),
        Command::Gen(args) => gen::run(args),
        Command::Fuzz(args) => fuzz::run(args),
        Command::Bench(args) => bench::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("reports serialize")
                ),
            }
            if out.disagreement {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
