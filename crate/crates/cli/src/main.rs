//! `decoh`: compute exact decoherence dynamics for a qubit coupled to a
//! band-edge reservoir, compare against the Lorentzian model, and verify
//! every closed form against independent numeric routes.
//!
//! Subcommands: `roots` (characteristic roots, residues, derived
//! constants), `trajectory` (CSV curves and an optional SVG overlay),
//! `verify` (the check battery). Exit codes: 0 success, 1 failed check,
//! 2 invalid input, 3 I/O failure.

mod config;
mod error;
mod render;
mod roots_cmd;
mod trajectory_cmd;
mod verify_cmd;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::SharedArgs;
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "decoh",
    version,
    about = "Band-edge qubit decoherence: exact amplitudes, comparisons, verification",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the characteristic quartic; print roots, residues, tau, |D|.
    Roots(RootsArgs),
    /// Evolve the initial state and emit CSV files (and optionally SVG).
    Trajectory(TrajectoryArgs),
    /// Run the verification battery; exit 0 only if every check passes.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RootsArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Machine-readable JSON on stdout instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Also write an SVG overlay of the coherence magnitudes.
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Machine-readable JSON report on stdout.
    #[arg(long)]
    json: bool,
    /// Reduced-span subset of the checks; completes in a few seconds.
    #[arg(long)]
    quick: bool,
    /// Fault-injection hook: perturb one residue so the failure path can
    /// be exercised end to end.
    #[arg(long, hide = true)]
    corrupt_residue: bool,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (`decoh ... | head`),
    // like every other line-oriented tool, instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Roots(args) => {
            let job = config::build(&args.shared)?;
            roots_cmd::run(&job, args.json)
        }
        Command::Trajectory(args) => {
            let job = config::build(&args.shared)?;
            trajectory_cmd::run(&job, args.svg)
        }
        Command::Verify(args) => {
            let job = config::build(&args.shared)?;
            verify_cmd::run(&job, args.json, args.quick, args.corrupt_residue)
        }
    }
}
