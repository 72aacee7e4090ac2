//! `mul`: run μ programs or explore them interactively.

mod config;
mod repl;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;

#[derive(Parser)]
#[command(name = "mul", version, about = "Run programs in the μ language")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Print one line per reduction step: step, rule, store size, redex.
    #[arg(long, global = true)]
    trace: bool,
    /// Start with only the native `#print` installed.
    #[arg(long, global = true)]
    no_prelude: bool,
    #[arg(long, global = true, value_name = "N", default_value_t = Config::default().max_steps,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, global = true, value_name = "N", default_value_t = Config::default().max_constraint_depth,
          value_parser = positive)]
    max_constraint_depth: usize,
    /// Print the core program after desugaring instead of running it.
    #[arg(long, global = true)]
    dump_desugared: bool,
    /// Print the prelude source and exit.
    #[arg(long, global = true)]
    dump_prelude: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a file and print the resulting identity.
    Run { file: PathBuf },
    /// Interactive session with a persistent method store.
    Repl,
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Evaluation recurses over nesting depth; deep programs need more than the
/// default main-thread stack.
const STACK: usize = 512 << 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config {
        prelude_enabled: !cli.no_prelude,
        max_steps: cli.max_steps,
        max_constraint_depth: cli.max_constraint_depth,
        trace: cli.trace,
        dump_desugared: cli.dump_desugared,
        dump_prelude: cli.dump_prelude,
    };
    if config.dump_prelude {
        print!("{}", mul_core::prelude::PRELUDE_SOURCE);
        return ExitCode::SUCCESS;
    }
    let command = cli.command.unwrap_or(Command::Repl);
    let worker = std::thread::Builder::new()
        .stack_size(STACK)
        .spawn(move || match command {
            Command::Run { file } => run::run_file(&file, &config),
            Command::Repl => repl::repl(&config),
        })
        .expect("spawn evaluator thread");
    match worker.join() {
        Ok(code) => ExitCode::from(code),
        Err(panic) => std::panic::resume_unwind(panic),
    }
}
