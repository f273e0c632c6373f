//! Command-line front end for `hjfp`: single queries, sampled benchmark
//! batches with CSV/JSON reports, and 1D solution profiles.

pub mod commands;
pub mod report;

use clap::{Parser, Subcommand};

/// Environment variable that sets the number of worker threads.
pub const THREADS_ENV: &str = "HJFP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hjfp", version, about = "Fixed-point Hopf-Lax solver for Hamilton-Jacobi equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate u(x, t) at one point.
    Solve(commands::SolveArgs),
    /// Solve a sampled batch per dimension and write an error report.
    Bench(commands::BenchArgs),
    /// Write u and du/dx on a 1D grid at several times.
    Profile(commands::ProfileArgs),
}

/// Sizes the global rayon pool from `HJFP_THREADS` when it is set.
pub fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
    anyhow::ensure!(n > 0, "{THREADS_ENV} must be positive");
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

pub fn run(cli: &Cli) -> anyhow::Result<u8> {
    init_threads()?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a, &mut out),
        Command::Bench(a) => commands::cmd_bench(a, &mut out),
        Command::Profile(a) => commands::cmd_profile(a),
    }
}
