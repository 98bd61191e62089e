//! Thin command-line shim over the library harness. All real work lives in
//! gch::harness; this file only parses arguments, loads the config, applies
//! flag overrides, and maps outcomes to process exit codes.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use gch::config::RunConfig;
use gch::harness::{
    cmd_compare_forms, cmd_converge, cmd_presets, cmd_run, cmd_verify, exit_code_for,
};

#[derive(Parser)]
#[command(
    name = "gch",
    version,
    about = "Pseudospectral solver and verification harness for a family of \
             dispersion-generalized Camassa-Holm equations"
)]
struct Cli {
    /// JSON configuration file; omitted means all defaults (classical
    /// Camassa-Holm on 128 nodes).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override samples.seed from the config.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    /// Override output.directory from the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Suppress progress text; artifacts are still written.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured problem; writes timeseries.csv, snapshots,
    /// and report.json
    Run,
    /// Temporal-order study against a forced traveling-wave solution
    Converge,
    /// Run a verification suite and write its JSON report
    Verify {
        /// commutator | accretivity | lipschitz | bbound | frozen-growth |
        /// continuous-dependence | isometry | all
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Report residuals between the two published right-hand-side forms
    CompareForms,
    /// List the operator presets
    Presets,
}

fn run(cli: Cli) -> i32 {
    let loaded = match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    };
    let mut config = match loaded {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    if let Some(seed) = cli.seed {
        config.samples.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output.directory = out.display().to_string();
    }

    let outcome = match &cli.command {
        Command::Run => cmd_run(&config, cli.quiet),
        Command::Converge => cmd_converge(&config, cli.quiet),
        Command::Verify { suite } => cmd_verify(&config, suite, cli.quiet),
        Command::CompareForms => cmd_compare_forms(&config, cli.quiet),
        Command::Presets => cmd_presets(cli.quiet),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn main() {
    std::process::exit(run(Cli::parse()));
}
