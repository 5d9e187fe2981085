// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! `fluxsim`: batch driver for the flux-qubit decoherence experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fluxsim_core::config::RunConfig;
use fluxsim_core::csv::Table;
use fluxsim_core::harness::{self, HarnessOptions};
use fluxsim_core::{Error, Result};
use serde::Serialize;

/// Exit code for a simulation whose fit does not describe the data.
const EXIT_FIT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fluxsim",
    version,
    about = "Decoherence of a driven multilevel 2D SQUID flux qubit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels and flux matrix elements versus x_e.
    Spectrum(Common),
    /// Spectral densities of the control and readout circuits.
    Bath(Common),
    /// Free decay from the equal superposition of the two lowest levels.
    FreeDecay(Common),
    /// Resonantly driven decay from the ground state.
    Driven(Common),
    /// Relaxation and decoherence times versus drive amplitude, N = 4 and 2.
    Table2(Common),
    /// Characteristic times across a circuit or temperature sweep.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Run configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N", env = "FLUXSIM_THREADS")]
    threads: Option<usize>,
    /// Repeat each propagation at half the time step and report the drift.
    #[arg(long)]
    dt_refine: bool,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_table(dir: &Path, name: &str, table: &Table) -> Result<()> {
    let path = dir.join(name);
    table.write(&path)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn fit_exit(ok: bool, what: &str) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("warning: {what} fit does not describe the simulated series; see the summary file");
        ExitCode::from(EXIT_FIT)
    }
}

fn run(command: &Command) -> Result<ExitCode> {
    let (Command::Spectrum(c)
    | Command::Bath(c)
    | Command::FreeDecay(c)
    | Command::Driven(c)
    | Command::Table2(c)
    | Command::Sweep(c)) = command;
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(Error::config("--threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Numeric(e.to_string()))?;
    }
    let cfg = RunConfig::load(&c.config)?;
    let opts = HarnessOptions { dt_refine: c.dt_refine };
    fs::create_dir_all(&c.out)?;
    let out = c.out.as_path();
    match command {
        Command::Spectrum(_) => {
            write_table(out, "spectrum.csv", &harness::run_spectrum(&cfg)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bath(_) => {
            let (table, summary) = harness::run_bath(&cfg)?;
            write_table(out, "bath.csv", &table)?;
            write_json(&out.join("bath_summary.json"), &summary)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FreeDecay(_) => {
            let (table, summary) = harness::run_free_decay(&cfg, &opts)?;
            write_table(out, "free_decay.csv", &table)?;
            write_json(&out.join("free_decay_summary.json"), &summary)?;
            Ok(fit_exit(summary.fits_ok(), "free-decay"))
        }
        Command::Driven(_) => {
            let (table, summary) = harness::run_driven(&cfg, &opts)?;
            write_table(out, "driven.csv", &table)?;
            write_json(&out.join("driven_summary.json"), &summary)?;
            Ok(fit_exit(summary.fits_ok(), "driven"))
        }
        Command::Table2(_) => {
            let (table, rows) = harness::run_table2(&cfg, &opts)?;
            write_table(out, "table2.csv", &table)?;
            write_json(&out.join("table2_summary.json"), &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(_) => {
            let table = harness::run_sweep(&cfg, &opts)?;
            let name = cfg
                .sweep
                .as_ref()
                .map_or("sweep".to_string(), |s| s.parameter.name().to_string());
            write_table(out, &format!("sweep_{name}.csv"), &table)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
