//! `forge`: build germs around closed curves and certify hyperbolic
//! principal cycles.
//!
//! Exit codes: 0 hyperbolic (and confirmed when the oracle runs), 1 other
//! failure, 2 torsion not quantized, 3 circle obstruction, 4 umbilic on the
//! cycle, 5 oracle mismatch, 6 not hyperbolic.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use forge_core::{run_pipeline, Command, RunConfig};

#[derive(Parser)]
#[command(name = "forge", version, about = "Hyperbolic principal cycles on surface germs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify one germ, check it against the return map, write all artifacts.
    Run(Args),
    /// Tabulate the exponent over a sweep of initial angles.
    Sweep(Args),
    /// Write the germ descriptor and the OBJ mesh of the strip.
    Mesh(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON config file. `FORGE_OUTPUT_DIR` overrides `outputs.dir`.
    #[arg(long)]
    config: PathBuf,
}

fn execute(cli: Cli) -> anyhow::Result<i32> {
    let (command, args) = match cli.command {
        Cmd::Run(a) => (Command::Run, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Mesh(a) => (Command::Mesh, a),
    };
    let config = RunConfig::load(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    let outcome = run_pipeline(&config, command).context("writing report")?;
    let report = &outcome.report;
    match &report.error {
        Some(err) => eprintln!("forge: {:?}: {}", report.status, err.message),
        None => eprintln!("forge: {:?}", report.status),
    }
    println!("{}", outcome.report_path.display());
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("forge: {err:#}");
            ExitCode::from(1)
        }
    }
}
