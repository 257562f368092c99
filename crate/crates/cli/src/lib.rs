//! Command-line front end: alpha-spec parsing, dispatch, and CSV/JSON reports.

pub mod cli;
pub mod parse;
pub mod report;
pub mod run;

use std::io::Write;

pub use cli::{Check, Cli, Command, Opts, SumKind};
pub use parse::{parse_alpha, ParseError, ParseErrorKind};
pub use report::{emit, Format, Meta, Report, Row};
pub use run::{resolve_budget, run, CliError, Outcome};

/// Runs `cli`, writes its report, and returns the process exit code:
/// 0 on pass, 1 when a checked statement fails, 2 on usage or precision errors.
pub fn execute(cli: &Cli, budget_env: Option<&str>) -> u8 {
    let result = resolve_budget(cli.opts.budget, budget_env).and_then(|b| run(cli, b));
    let (report, code) = match result {
        Ok(outcome) => {
            let skipped = outcome.skipped();
            if skipped > 0 {
                eprintln!("note: {skipped} row(s) skipped (beyond the budget or the available quotients)");
            }
            let code = outcome.exit_code();
            (outcome.report, code)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            if cli.opts.format == Format::Csv {
                return 2;
            }
            let error = report::ErrorInfo { code: e.code().into(), message: e.to_string() };
            (Report { meta: run::meta(cli), rows: vec![], error: Some(error) }, 2)
        }
    };
    match write_report(cli, &report) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error[io_error]: {e}");
            2
        }
    }
}

fn write_report(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let bytes = emit(report, cli.opts.format)?;
    match &cli.opts.out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    }
}
