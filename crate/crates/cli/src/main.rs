use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use safescreen::harness::{self, RunConfig};

#[derive(Parser)]
#[command(name = "safescreen", version, about = "Solve convex problems with safe screening")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem and write its trace.
    Solve(RunArgs),
    /// Run an l1_ls problem in both parameterizations and time them.
    Compare(RunArgs),
    /// Check every screening decision against a high-precision reference solve.
    Verify(RunArgs),
    /// Print the configuration reference as markdown.
    ConfigReference,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Override data and solver seeds.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    no_screening: bool,
}

impl RunArgs {
    fn load(&self) -> safescreen::Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.override_seed(seed);
        }
        if self.no_screening {
            cfg.disable_screening();
        }
        Ok(cfg)
    }
}

fn run(cli: &Cli, out: &mut dyn Write) -> safescreen::Result<i32> {
    match &cli.command {
        Command::Solve(a) => harness::cmd_solve(&a.load()?, out),
        Command::Compare(a) => harness::cmd_compare(&a.load()?, out),
        Command::Verify(a) => harness::cmd_verify(&a.load()?, out),
        Command::ConfigReference => {
            write!(out, "{}", harness::config_reference())?;
            Ok(harness::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = match run(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            harness::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
