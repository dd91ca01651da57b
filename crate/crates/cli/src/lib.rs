//! Command-line front end: argument parsing, spec files and report output.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod spec_file;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use error::Failure;

fn finish(result: Result<(), Failure>) -> u8 {
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("auxetic: {f}");
            f.exit_code()
        }
    }
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        Command::Quad(a) => finish(
            commands::quad(&a).and_then(|r| r.write(&a.common.out, a.common.format, a.common.timestamp).map(drop)),
        ),
        Command::Framework(a) => {
            let c = &a.common;
            match commands::framework(&a) {
                Ok(r) => finish(r.write(&c.out, c.format, c.timestamp).map(drop)),
                Err(p) => {
                    // Partial results still go to disk before the failure is reported.
                    if !p.report.tables.is_empty() {
                        if let Err(io) = p.report.write(&c.out, c.format, c.timestamp) {
                            eprintln!("auxetic: {io}");
                        }
                    }
                    finish(Err(p.failure))
                }
            }
        }
        Command::Conic(a) => finish(commands::conic(&a).map(|line| println!("{line}"))),
    }
}
