use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use blowup_lab::{dispatch, Command, ExperimentConfig, EXIT_INVALID};
use clap::Parser;

/// Blow-up laboratory for weakly coupled damped wave systems.
#[derive(Debug, Parser)]
#[command(name = "blowup-lab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV, SVG and summary artifacts.
    #[arg(long)]
    out: PathBuf,
}

fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let exp = match ExperimentConfig::load(&cli.config).and_then(ExperimentConfig::validate) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    match dispatch(cli.command, &exp, &cli.out) {
        Ok(report) => {
            let _ = write!(out, "{report}");
            if let Some(c) = report.first_failure() {
                let _ = writeln!(err, "failed check: {}", c.name);
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr()))
}
