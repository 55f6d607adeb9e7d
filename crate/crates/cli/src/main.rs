//! `simplexlab`: emptiness, width and census tools for lattice 4-simplices.
//!
//! Exit status: 0 on success (or "empty"), 1 when the answer is negative or
//! a checked property fails, 2 on bad input.

mod commands;
mod input;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use commands::Command;

#[derive(Parser, Debug)]
#[command(name = "simplexlab", version, about = "Exact lattice geometry for empty 4-simplices")]
struct Cli {
    /// Emit a single JSON document {command, inputs, result, timing_ms}.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

/// What a command reports back to `main`.
pub struct Outcome {
    pub lines: Vec<String>,
    pub result: serde_json::Value,
    /// `false` maps to exit status 1.
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = cli.command.name();
    let inputs = serde_json::to_value(&cli.command).unwrap_or(serde_json::Value::Null);
    let outcome = commands::run(&cli.command);
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;

    match outcome {
        Ok(out) => {
            if cli.json {
                let doc = json!({ "command": name, "inputs": inputs, "result": out.result, "timing_ms": timing_ms });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                for line in &out.lines {
                    println!("{line}");
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                let doc = json!({ "command": name, "inputs": inputs, "error": format!("{e:#}"), "timing_ms": timing_ms });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
