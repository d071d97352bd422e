use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use phasecraft::commands;
use phasecraft::output::{report_summary, summarize, MANIFEST};
use phasecraft::scenario::{parse_scenario, Config, Scenario, SelftestConfig, Subcommand};
use phasecraft::CliError;

#[derive(Parser)]
#[command(name = "phasecraft", version, about = "Phase-space mechanics runs from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    scenario: PathBuf,
    /// Output directory; overrides the scenario's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for anything random; overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SelftestArgs {
    scenario: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Generalized Euler equations on a Lie group
    Euler(RunArgs),
    /// Affine bodies through their Sutherland/Calogero lattices
    Affine(RunArgs),
    /// Microcanonical shell averages by Monte Carlo
    Ensemble(RunArgs),
    /// Wigner function of a builtin state on a grid
    Wigner(RunArgs),
    /// Lie-algebra cohomology and cocycle radicals
    Cohomology(RunArgs),
    /// The acceptance suite
    Selftest(SelftestArgs),
    /// Pass/fail table of a manifest
    Summary { manifest: PathBuf },
}

fn default_out(sub: Subcommand) -> PathBuf {
    Path::new("phasecraft-out").join(sub.name())
}

fn execute(sub: Subcommand, scenario: Scenario, out: Option<PathBuf>, seed: Option<u64>) -> Result<bool, CliError> {
    let dir = out.or_else(|| scenario.out.clone()).unwrap_or_else(|| default_out(sub));
    let manifest = commands::run(&scenario, &dir, seed)?;
    let (table, ok) = summarize(&manifest);
    print!("{table}");
    println!("artifacts: {}", dir.join(MANIFEST).display());
    Ok(ok)
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    let (sub, args) = match cli.command {
        Command::Euler(a) => (Subcommand::Euler, a),
        Command::Affine(a) => (Subcommand::Affine, a),
        Command::Ensemble(a) => (Subcommand::Ensemble, a),
        Command::Wigner(a) => (Subcommand::Wigner, a),
        Command::Cohomology(a) => (Subcommand::Cohomology, a),
        Command::Selftest(a) => {
            let scenario = match &a.scenario {
                Some(path) => parse_scenario(Subcommand::Selftest, path)?,
                None => Scenario {
                    subcommand: Subcommand::Selftest,
                    config: Config::Selftest(SelftestConfig::default()),
                    out: None,
                    seed: None,
                    tolerances: Default::default(),
                },
            };
            return execute(Subcommand::Selftest, scenario, a.out, a.seed);
        }
        Command::Summary { manifest } => {
            let (table, ok) = report_summary(&manifest)?;
            print!("{table}");
            return Ok(ok);
        }
    };
    let scenario = parse_scenario(sub, &args.scenario)?;
    execute(sub, scenario, args.out, args.seed)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
