mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use morava_core::FailureKind;

use commands::Cmd;
use config::{Globals, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "morava", version, about = "Morava E-theory of small groups")]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    cmd: Cmd,
}

fn exit_for(kind: FailureKind) -> u8 {
    match kind {
        FailureKind::Usage => 1,
        FailureKind::Invariant => 2,
        FailureKind::Precision => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match RunConfig::resolve(&cli.globals) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match commands::run(&cli.cmd, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_for(e.kind()));
        }
    };
    let text = output::render(&cfg, &cli.cmd.name(), &outcome);
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
