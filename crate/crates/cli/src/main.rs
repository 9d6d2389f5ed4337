mod args;
mod commands;
mod format;

use std::io::Write;
use std::process::ExitCode;

use centered_gamma::specfun::Precision;
use centered_gamma::Error;
use clap::Parser;

use args::Cli;

/// Text to emit and the process status that goes with it.
pub struct Output {
    pub text: String,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

fn status_of(e: &Error) -> u8 {
    match e {
        Error::Domain { .. } | Error::Config(_) => EXIT_USAGE,
        _ => EXIT_INCONCLUSIVE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec = Precision {
        rel_tol: cli.global.rel_tol,
        abs_tol: cli.global.abs_tol,
        max_iter: cli.global.max_iter,
        strict_margin: cli.global.strict_margin,
    };
    let result = prec.validate().and_then(|()| {
        let threads = cli.global.threads.unwrap_or_else(rayon::current_num_threads);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| commands::run(&cli, prec, threads))
    });
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(status_of(&e));
        }
    };
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(out.code)
}
