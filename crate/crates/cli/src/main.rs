//! `hubo`: encode, compile and benchmark assignment problems under the QUBO
//! and HUBO encodings.

mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ConfigArgs;

#[derive(Debug, Parser)]
#[command(name = "hubo", version, about = "QUBO versus HUBO encodings for QAOA", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode the instance and write the Pauli-Z polynomial and qubit layout.
    Encode(ConfigArgs),
    /// Compile one cost layer and report gate counts per layer.
    Compile(ConfigArgs),
    /// Optimize QAOA layer by layer and write the quality-versus-gates series.
    Benchmark(ConfigArgs),
    /// Repeat the benchmark over a ladder of smaller instances.
    Scaling(ConfigArgs),
    /// Print the resolved configuration as TOML.
    Config(ConfigArgs),
}

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config file or instance input.
    Config(String),
    /// The pipeline failed after the configuration was accepted.
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<hubo_core::Error> for Failure {
    fn from(e: hubo_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (args, command): (&ConfigArgs, fn(&config::BenchmarkConfig) -> Result<_, Failure>) = match &cli.command {
        Command::Config(args) => {
            print!("{}", args.resolve()?.to_toml());
            return Ok(());
        }
        Command::Encode(a) => (a, commands::cmd_encode),
        Command::Compile(a) => (a, commands::cmd_compile),
        Command::Benchmark(a) => (a, commands::cmd_benchmark),
        Command::Scaling(a) => (a, commands::cmd_scaling),
    };
    let cfg = args.resolve()?;
    let dir = command(&cfg)?;
    println!("wrote {}", dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
