//! `noisyqml` command-line tool.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

/// A bad combination of options, reported with exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use noisyqml::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<E>() {
        Some(E::Config(_) | E::UnknownKind(_) | E::Layout(_)) => 1,
        Some(E::Numerical(_) | E::NotTracePreserving(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let level = if cli.quiet {
        log::LevelFilter::Error
    } else {
        log::LevelFilter::Info
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let usage = anyhow::Error::new(UsageError("x".into()));
        assert_eq!(exit_code(&usage), 1);
        let numerical = anyhow::Error::new(noisyqml::Error::Numerical("nan".into())).context("training");
        assert_eq!(exit_code(&numerical), 3);
        let data = anyhow::Error::new(noisyqml::Error::Data("bad".into()));
        assert_eq!(exit_code(&data), 2);
        let config = anyhow::Error::new(noisyqml::Error::Config("bad".into()));
        assert_eq!(exit_code(&config), 1);
    }
}
