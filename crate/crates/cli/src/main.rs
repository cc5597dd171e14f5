//! `gradchain`: ion-chain geometry, gradient-induced spin couplings and
//! pulse-program simulation from a JSON trap configuration.
//!
//! Exit codes: 0 success, 2 input error, 3 numeric failure, 4 pulse program
//! parse error.

mod commands;
mod failure;
mod output;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand};

use crate::commands::SimulateArgs;
use crate::failure::{CmdResult, Failure};
use crate::output::OutputOptions;
use crate::sweep::{parse_endpoint, Quantity, Scale, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "gradchain", version, about = "Ion chains in a magnetic field gradient")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Trap configuration (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output file, or directory for `couplings`.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for measurement sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Shots per `measure` instruction.
    #[arg(long, global = true, default_value_t = 1000)]
    shots: usize,

    /// Omit the `generated_at` field and wall-clock timings from outputs.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Also write two-column `.dat` files for gnuplot.
    #[arg(long, global = true)]
    emit_plot_data: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Equilibrium positions and axial modes.
    Chain,
    /// J matrix, mode couplings and validity check.
    Couplings,
    /// Carrier and first-order sideband lines of one ion.
    Spectrum {
        /// Ion index, 1-based.
        #[arg(long, default_value_t = 1)]
        ion: usize,
    },
    /// Run a pulse program.
    Simulate {
        /// Pulse program (.pp).
        #[arg(long, value_name = "FILE")]
        program: PathBuf,
        /// Initial basis state, one character per ion (default all 0).
        #[arg(long)]
        initial: Option<String>,
    },
    /// Evaluate a quantity over a range of one config parameter.
    Sweep {
        /// Dotted path into the config, e.g. `field.uniform.b` or `nu1`.
        #[arg(long)]
        param: String,
        /// Start value: SI number or quantity such as `1T/m`.
        #[arg(long, value_parser = parse_endpoint, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, value_parser = parse_endpoint, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Scale::Lin)]
        scale: Scale,
        /// max_J, epsilon, delta_shift[j] or approx_J.
        #[arg(long, default_value = "max_J")]
        quantity: Quantity,
    },
}

fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> CmdResult<&'a Path> {
    value.as_deref().ok_or_else(|| Failure::Input(anyhow!("{flag} is required")))
}

fn run(cli: Cli) -> CmdResult {
    let opts = OutputOptions { timestamp: !cli.no_timestamp, plot_data: cli.emit_plot_data };
    let config = required(&cli.config, "--config")?;
    let out = required(&cli.out, "--out")?;
    match cli.command {
        Command::Chain => commands::chain(config, out, opts),
        Command::Couplings => commands::couplings(config, out, opts),
        Command::Spectrum { ion } => commands::spectrum(config, ion, out, opts),
        Command::Simulate { program, initial } => commands::simulate(
            SimulateArgs {
                config,
                program: &program,
                initial: initial.as_deref(),
                seed: cli.seed,
                shots: cli.shots,
                out,
            },
            opts,
        ),
        Command::Sweep { param, from, to, steps, scale, quantity } => {
            let spec = SweepSpec { path: param, from, to, steps, scale, quantity };
            sweep::sweep(config, &spec, out, opts)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
