use std::process::ExitCode;

use clap::Parser;
use permsearch_cli::{execute, Cli, UsageError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(cli.command, &cli.options).and_then(|report| {
        let text = report.render(cli.options.format)?;
        match &cli.options.out {
            Some(path) => std::fs::write(path, &text)?,
            None => print!("{text}"),
        }
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: at least one check failed");
            ExitCode::from(1)
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
