use std::process::ExitCode;

use clap::Parser;
use squeezelab_cli::config::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors with status 2 and help/version with 0
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match squeezelab_cli::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
