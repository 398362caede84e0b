mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Chi(a) => commands::chi(a),
        Command::Ingest(a) => commands::ingest(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Perturb(a) => commands::perturb_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgchi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
