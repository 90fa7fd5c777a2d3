mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match commands::run(cli) {
        Ok(out) => {
            render::emit(&out, format);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", serde_json::json!({ "error": "usage", "message": msg }));
            ExitCode::from(2)
        }
        Err(Failure::Data { kind, message }) => {
            eprintln!("{}", serde_json::json!({ "error": kind, "message": message }));
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(out)) => {
            render::emit(&out, format);
            ExitCode::from(1)
        }
    }
}
