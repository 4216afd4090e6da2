use std::io::{self, Write};

use clap::Parser;

use pqr_cli::{run, Cli};

fn main() {
    match run(Cli::parse()) {
        Ok(text) => {
            let mut out = io::stdout().lock();
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(out, "{text}").and_then(|_| out.flush());
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            std::process::exit(e.exit_code());
        }
    }
}
