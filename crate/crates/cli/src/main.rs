mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};

/// One command's output. `code` is the process exit status.
pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
    pub code: u8,
}

impl Report {
    pub fn ok(json: serde_json::Value, text: String) -> Self {
        Report { json, text, code: 0 }
    }

    pub fn failed(json: serde_json::Value, text: String) -> Self {
        Report { json, text, code: 1 }
    }
}

/// Errors that stop a command before it produces a report.
#[derive(Debug)]
pub enum CliError {
    /// Bad input or a refused request; exit 2.
    Usage(String),
    /// The command ran and the check failed; exit 1.
    Failed(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = commands::format_of(&cli.command);
    match commands::run(cli.command) {
        Ok(report) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("JSON output") + "\n",
                Format::Text => report.text,
            };
            // A closed pipe (e.g. `| head`) is not an error of the command.
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::from(report.code),
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
