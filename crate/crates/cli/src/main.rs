use std::process::ExitCode;

use clap::Parser;
use ostrowski_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let env = std::env::var("OSTROWSKI_BUDGET").ok();
    ExitCode::from(execute(&cli, env.as_deref()))
}
