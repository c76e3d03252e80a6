//! `mfold` command line: execute run manifests, emit report CSVs and
//! summaries.
//!
//! Exit codes: 0 when every verification task passed, 1 on usage or input
//! errors, 2 when a check failed (its witness is recorded in the reports).

mod manifest;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "mfold",
    version,
    about = "weighted maximal-operator toolkit runner"
)]
struct Cli {
    /// List the available verification checks and exit.
    #[arg(long)]
    list_checks: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a JSON run manifest.
    Run {
        manifest: PathBuf,
        /// Replace every task seed with this value.
        #[arg(long)]
        seed_override: Option<u64>,
        /// Worker threads for window sweeps and corpus loops
        /// (falls back to MFOLD_THREADS, then to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        for name in manifest::CHECK_NAMES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run {
        manifest,
        seed_override,
        threads,
    }) = cli.command
    else {
        eprintln!("usage: mfold run <manifest.json> (or mfold --list-checks)");
        return ExitCode::from(1);
    };

    let threads = threads.or_else(|| {
        std::env::var("MFOLD_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("mfold: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }

    let parsed = match runner::parse_manifest(&manifest) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("mfold: {e:#}");
            return ExitCode::from(1);
        }
    };
    match runner::run_manifest(&parsed, seed_override) {
        Ok(outcome) if outcome.all_passed => ExitCode::SUCCESS,
        Ok(outcome) => {
            eprintln!("mfold: failed checks: {}", outcome.failed_checks.join(", "));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("mfold: {e:#}");
            ExitCode::from(1)
        }
    }
}
