mod args;
mod commands;
mod context;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use ffa_core::error::Category;

use args::{Cli, Command};

/// 0 success, 2 input error, 3 unsupported model, 4 no attribution,
/// 5 data mismatch or failed verification, 6 search space too large.
fn exit_code(err: &anyhow::Error) -> u8 {
    let core = err.chain().find_map(|e| e.downcast_ref::<ffa_core::Error>());
    match core.map(ffa_core::Error::category) {
        Some(Category::Capability) => 3,
        Some(Category::EmptyAttribution) => 4,
        Some(Category::Mismatch) => 5,
        Some(Category::Capacity) => 6,
        Some(Category::Input) | None => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(name) = cli.schema {
        if name.is_empty() {
            for (n, _) in ffa_core::io::SCHEMAS {
                println!("{n}");
            }
        } else {
            match ffa_core::io::schema(&name) {
                Some(text) => print!("{text}"),
                None => anyhow::bail!(ffa_core::Error::Contract(format!("unknown format `{name}`"))),
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let Some(command) = cli.command else {
        Cli::command().print_help()?;
        return Ok(ExitCode::from(2));
    };
    match &command {
        Command::Explain(a) => commands::explain(a)?,
        Command::Enumerate(a) => commands::enumerate(a)?,
        Command::Attribute(a) => commands::attribute(a)?,
        Command::Compare(a) => commands::compare(a)?,
        Command::Verify(a) => {
            if !commands::verify(a)? {
                eprintln!("verification failed");
                return Ok(ExitCode::from(5));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
