use std::process::ExitCode;

use clap::Parser;
use ncvem_cli::{run, Cli, CliError, OUTPUT_DIR_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.resolve(std::env::var_os(OUTPUT_DIR_ENV)).and_then(|config| run(&config));
    match result {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            for path in &summary.artifacts {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ncvem: {e}");
            ExitCode::from(CliError::exit_code(&e))
        }
    }
}
