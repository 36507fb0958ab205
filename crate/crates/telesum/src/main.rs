use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use telesum::problem::{parse_mode, parse_range, DEFAULT_BOUND};
use telesum::{parse_problem, run, CliError, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Telescope,
    Reduce,
    Certificate,
    CheckPoles,
}

/// Reduction-based creative telescoping.
#[derive(Debug, Parser)]
#[command(name = "telesum", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem file.
    file: PathBuf,
    /// full, first, or bounded=<d>.
    #[arg(long)]
    mode: Option<String>,
    /// Check every telescoper against its certificate in the module.
    #[arg(long)]
    verify: bool,
    /// Also print fully expanded certificate coefficients.
    #[arg(long)]
    expand_certificate: bool,
    /// Integer range a..b for the pole check.
    #[arg(long)]
    pole_range: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn usage_error(msg: String) -> CliError {
    CliError::Engine(telesum_core::error::Error::Parse { line: 0, column: 0, message: msg })
}

fn main_inner(args: Args) -> Result<(), CliError> {
    let start = Instant::now();
    let text = std::fs::read_to_string(&args.file).map_err(|source| CliError::Io { path: args.file.clone(), source })?;
    let problem = parse_problem(&text)?;
    for w in &problem.warnings {
        eprintln!("warning: {}", w);
    }
    let mut opts = problem.options.clone();
    if let Some(m) = &args.mode {
        let (mode, defaulted) = parse_mode(m).ok_or_else(|| usage_error(format!("invalid --mode `{}`", m)))?;
        if defaulted {
            eprintln!("warning: bounded mode without a bound; using {}", DEFAULT_BOUND);
        }
        opts.mode = mode;
    }
    opts.verify |= args.verify;
    opts.expand_certificate |= args.expand_certificate;
    if let Some(r) = &args.pole_range {
        opts.pole_range = Some(parse_range(r).ok_or_else(|| usage_error(format!("invalid --pole-range `{}`", r)))?);
    }
    let sub = match args.command {
        Command::Telescope => Subcommand::Telescope,
        Command::Reduce => Subcommand::Reduce,
        Command::Certificate => Subcommand::Certificate,
        Command::CheckPoles => Subcommand::CheckPoles,
    };
    let report = run(&problem, sub, &opts)?;
    let text = report.render();
    match &args.output {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => print!("{}", text),
    }
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    if !report.verified() {
        return Err(CliError::VerificationFailed);
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
