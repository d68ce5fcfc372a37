mod commands;
mod output;
mod settings;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, ThresholdExceeded};

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ThresholdExceeded>().is_some() {
        return 4;
    }
    match e.downcast_ref::<alphasun_core::Error>() {
        Some(c) if c.is_domain() || matches!(c, alphasun_core::Error::DivergentRegime(_)) => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn kind(e: &anyhow::Error) -> &'static str {
    match exit_code(e) {
        2 => "domain",
        3 => "convergence",
        4 => "threshold",
        _ => "io",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            let mut err = std::io::stderr().lock();
            if json {
                let doc = serde_json::json!({ "error": { "code": code, "kind": kind(&e), "message": format!("{e:#}") } });
                let _ = writeln!(err, "{doc}");
            } else {
                let _ = writeln!(err, "error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
