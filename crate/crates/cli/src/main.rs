//! `gna`: command-line front end.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 mathematical
//! precondition failure, 4 failed internal postcondition.

mod args;
mod commands;
mod error;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gna_core::error::ErrorCategory;
use serde_json::{json, Value};

use args::Args;

fn category_name(c: ErrorCategory) -> &'static str {
    match c {
        ErrorCategory::Input => "input",
        ErrorCategory::Precondition => "precondition",
        ErrorCategory::Postcondition => "postcondition",
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let name = args.command.name();
    let (out, code) = match commands::run(&args.command, &args.global) {
        Ok((result, ctx)) => {
            let doc = json!({
                "command": name,
                "grid": serde_json::to_value(&ctx.grid_spec).expect("serializable"),
                "config": serde_json::to_value(&ctx.cfg).expect("serializable"),
                "result": result,
            });
            (doc, 0)
        }
        Err(e) => {
            let doc = json!({
                "command": name,
                "error": {
                    "category": category_name(e.category()),
                    "message": e.to_string(),
                    "report": e.report().map_or(Value::Null, report::report),
                },
            });
            eprintln!("gna {name}: {e}");
            (doc, e.exit_code())
        }
    };
    let text = report::render(&out, args.global.output);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
