use std::process::ExitCode;

use clap::Parser;
use lexnet_cli::args::Cli;
use lexnet_cli::{error_json, run};

fn main() -> ExitCode {
    let cfg = Cli::parse().into_config();
    match run(&cfg) {
        Ok(summary) => {
            for path in &summary.written {
                println!("{}", path.display());
            }
            for e in &summary.errors {
                eprintln!("{}", error_json(&e.error, Some(&e.item)));
            }
            if summary.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e, None));
            ExitCode::FAILURE
        }
    }
}
