use std::process::ExitCode;

use clap::Parser;
use tropsand::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tropsand: {e}");
            e.exit_code()
        }
    }
}
