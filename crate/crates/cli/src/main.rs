//! `chanq` command line: quantizer design for binary-input
//! continuous-output channels.

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::OutputFormat;
use run::RunError;

#[derive(Parser)]
#[command(name = "chanq", about = "Design N-level channel-output quantizers maximizing beta*I(X;Z) - C(p_Z)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the optimal quantizer(s) and write the report/table.
    Solve {
        config: PathBuf,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Which files to write (overrides the config).
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Report whether a single output-line threshold is optimal for N=2.
    CheckLemma1 { config: PathBuf },
    /// Solve and force a brute-force oracle comparison (small instances only).
    Oracle {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch() -> Result<(), RunError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { config, out, format } => solve_like(config, out, format, false),
        Command::Oracle { config, out, format } => solve_like(config, out, format, true),
        Command::CheckLemma1 { config } => {
            let cfg = run::load_config(&config)?;
            let verdict = run::run_lemma1(&cfg)?;
            println!(
                "single-threshold optimal: {}",
                if verdict { "yes" } else { "no" }
            );
            Ok(())
        }
    }
}

fn solve_like(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    force_oracle: bool,
) -> Result<(), RunError> {
    let cfg = run::load_config(&config)?;
    let dir = out
        .or_else(|| cfg.outputs.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let fmt = format
        .or(cfg.outputs.format)
        .unwrap_or(OutputFormat::Both);
    let output = run::execute(&cfg, force_oracle)?;
    let written = run::write_outputs(&output, &dir, fmt)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    for rec in &output.report.results {
        println!(
            "beta={} objective={} mi_xz={} constraint={}",
            report::sig12(rec.beta),
            report::sig12(rec.objective),
            report::sig12(rec.mi_xz),
            report::sig12(rec.constraint_value),
        );
    }
    if let Some(cmp) = &output.report.oracle {
        println!("oracle comparison: gap {:e} (ok)", cmp.gap);
    }
    if let Some(v) = output.report.lemma1_single_threshold {
        println!("single-threshold optimal: {}", if v { "yes" } else { "no" });
    }
    Ok(())
}
