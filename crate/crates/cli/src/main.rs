//! `qam` command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage, parse or domain errors, 2 when an
//! internal check fails (a searched lower bound above an upper bound, or a
//! reproduced example row off its closed form).

mod args;
mod commands;
mod output;
mod repro;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::{render, write_out, Render};

const THREADS_ENV: &str = "QAM_THREADS";

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit<R: Render>(cli: &Cli, report: qam_core::Result<R>) -> Result<ExitCode, String> {
    let report = report.map_err(|e| e.to_string())?;
    let text = render(&report, cli.format).map_err(|e| e.to_string())?;
    write_out(&text, cli.out.as_deref()).map_err(|e| e.to_string())?;
    let violations = report.violations();
    for v in &violations {
        eprintln!("violation: {v}");
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    configure_threads()?;
    match &cli.command {
        Command::Mean(a) => emit(cli, commands::mean(a)),
        Command::Op(a) => emit(cli, commands::op(a)),
        Command::Norm(a) => emit(cli, commands::norm(a)),
        Command::Bounds(a) => emit(cli, commands::bounds(a)),
        Command::Rho(a) => emit(cli, commands::rho(a)),
        Command::Example(a) => emit(cli, commands::example(a)),
        Command::Converge(a) => emit(cli, commands::converge(a)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    run(&cli).unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(1)
    })
}
