mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("GREEDY_LOG", "error")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Stability(a) => commands::stability(a),
        Command::Demo(d) => commands::demo(d),
        Command::GenDict(a) => commands::gen_dict(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("greedy: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
