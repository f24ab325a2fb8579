use clap::error::ErrorKind;
use clap::Parser;
use std::io::Write;

use toricfib::cli::{execute, exit_code, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match execute(&cli) {
        // a closed pipe downstream is not an error
        Ok(out) => {
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
