use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use thermo_neutral::config::RawConfig;
use thermo_neutral::{commands, CliError};

/// Thermodynamic-formalism toolkit: pressure surfaces, equilibrium
/// measures, and neutralized-entropy maximizers on symbolic systems.
#[derive(Parser)]
#[command(name = "thermo-neutral", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the pressure surface over a parameter grid
    Pressure(RunArgs),
    /// Sweep neutralized-entropy maximizers over rates
    Mmrne(RunArgs),
    /// Verify the symbolic entropy formula by exact cylinder sampling
    Verify(RunArgs),
    /// Analyze the Bernoulli family of a linear horseshoe
    Horseshoe(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key-value config file
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: THERMO_NEUTRAL_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
}

fn init_threads(requested: Option<usize>) {
    let from_env = std::env::var("THERMO_NEUTRAL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = requested.or(from_env) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn write_output(out: &Option<PathBuf>, csv: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, csv.as_bytes())?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let args = match &cli.command {
        Command::Pressure(a) | Command::Mmrne(a) | Command::Verify(a) | Command::Horseshoe(a) => a,
    };
    init_threads(args.threads);
    let raw = RawConfig::parse(&args.config)?;
    match &cli.command {
        Command::Pressure(a) => write_output(&a.out, &commands::cmd_pressure(raw)?),
        Command::Mmrne(a) => write_output(&a.out, &commands::cmd_mmrne(raw)?),
        Command::Verify(a) => write_output(&a.out, &commands::cmd_verify(raw, a.seed)?),
        Command::Horseshoe(a) => {
            let (csv, summary) = commands::cmd_horseshoe(raw)?;
            write_output(&a.out, &csv)?;
            eprint!("{summary}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
