mod args;
mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

use args::{Cli, Command};
use commands::Output;
use error::CliError;

const THREADS_VAR: &str = "FRACVAR_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| {
        CliError::usage(format!(
            "{THREADS_VAR}: expected a thread count, got '{value}'"
        ))
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("{THREADS_VAR}: {e}")))?;
    }
    Ok(())
}

fn emit(out: &Output, path: Option<&Path>) -> Result<(), CliError> {
    if let Some(summary) = &out.summary {
        eprintln!("{summary}");
    }
    match path {
        Some(p) => std::fs::write(p, &out.body)
            .map_err(|e| CliError::usage(format!("--output {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::compute(format!("writing output: {e}")))
        }
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    let (out, path) = match command {
        Command::Frac(a) => (commands::frac(a)?, &a.out.output),
        Command::Action(a) => (commands::action_cmd(a)?, &a.out.output),
        Command::Residual(a) => (commands::residual(a)?, &a.out.output),
        Command::Gateaux(a) => (commands::gateaux(a)?, &a.lagrangian.out.output),
        Command::Simulate(a) => (commands::simulate(a)?, &a.out.output),
        Command::Lyapunov(a) => (commands::lyapunov(a)?, &a.out.output),
        Command::Sweep(a) => (commands::sweep_cmd(a)?, &a.out.output),
        Command::Verify(a) => {
            let (out, passed) = commands::verify_cmd(a)?;
            emit(&out, a.output.as_deref())?;
            if !passed {
                let failed = out.body.lines().filter(|l| l.starts_with("FAIL")).count();
                return Err(CliError::ChecksFailed(failed.max(1)));
            }
            return Ok(());
        }
    };
    emit(&out, path.as_deref())
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run(argv: Vec<OsString>) -> i32 {
    let result = config::expand(argv).and_then(|argv| {
        let cli = match Cli::try_parse_from(argv) {
            Ok(cli) => cli,
            Err(e) if !e.use_stderr() => {
                let _ = e.print();
                return Ok(());
            }
            Err(e) => {
                let _ = e.print();
                return Err(CliError::Usage(String::new()));
            }
        };
        let command = cli.command.ok_or_else(config::missing_subcommand)?;
        init_threads()?;
        dispatch(&command)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(&e, CliError::Usage(m) if m.is_empty()) {
                eprintln!("{e}");
            }
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}
