mod commands;
mod config;
mod report;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::Value;

use config::{Cli, Command, Format, RunConfig};
use report::Report;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) | CliError::Io { .. } => EXIT_CHECK_FAILED,
        }
    }
}

/// A finished command: its report and how it should exit.
pub struct Outcome {
    pub report: Report,
    pub failed: bool,
    pub budget: bool,
    pub table: Option<Vec<Vec<String>>>,
}

impl Outcome {
    pub fn new(cfg: &RunConfig, results: Value, warnings: Vec<String>) -> Self {
        let report = Report { config: cfg.echo(), results, warnings, seed: cfg.opts.seed, table: None };
        Outcome { report, failed: false, budget: false, table: None }
    }
}

fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Show => commands::show(cfg),
        Command::Degseq => commands::degseq(cfg),
        Command::Pic { .. } => commands::pic(cfg),
        Command::Verify { suite } => verify::verify(cfg, *suite),
    }
}

fn emit(cfg: &RunConfig, mut out: Outcome) -> Result<u8, CliError> {
    out.report.table = out.table.take();
    let text = match cfg.opts.format {
        Format::Json => out.report.render_json(),
        Format::Text => out.report.render_text(),
        Format::Tsv => out
            .report
            .render_tsv()
            .ok_or_else(|| CliError::Usage("tsv output is available for degseq and pic only".into()))?,
    };
    match &cfg.opts.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        None => print!("{text}"),
    }
    Ok(if out.budget {
        EXIT_BUDGET
    } else if out.failed {
        EXIT_CHECK_FAILED
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    let result = RunConfig::resolve(cli).and_then(|cfg| {
        let out = run(&cfg)?;
        emit(&cfg, out)
    });
    match result {
        Ok(code) => {
            eprintln!("kmap: finished in {:.2}s", start.elapsed().as_secs_f64());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("kmap: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
