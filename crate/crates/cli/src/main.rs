use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fq_minors::minor::DEFAULT_BUDGET;

mod commands;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "fqminor", version, about = "Minors of random matrices over GF(q): formulas, oracles and simulation")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit JSON instead of text/CSV.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Minor search step budget.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an exact formula or bound.
    #[command(subcommand)]
    Formula(commands::FormulaCmd),
    /// Monte Carlo sweep over n, as CSV.
    Simulate(commands::SimulateArgs),
    /// Search a host for a minor and verify the witness.
    Minor(commands::MinorArgs),
    /// Check membership in a minor-closed class, or sweep its frequency.
    Class(commands::ClassArgs),
    /// Run the formula-versus-oracle check suite.
    Validate,
}

fn run(cli: Cli) -> Result<String, CliError> {
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Formula(cmd) => commands::formula(g, cmd),
        Command::Simulate(args) => commands::simulate(g, args),
        Command::Minor(args) => commands::minor(g, args),
        Command::Class(args) => commands::class(g, args),
        Command::Validate => commands::validate(g),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let out = cli.global.out.clone();
    let (text, code) = match run(cli) {
        Ok(text) => (text, 0),
        Err(CliError::Failed(text)) => (text, 2),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code());
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
