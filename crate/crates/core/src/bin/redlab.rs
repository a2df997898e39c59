use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use reduced_measure::experiment::{
    exit_code, run_capacity, run_reduce, run_solve, run_sweep, run_verify, ExperimentConfig, Outcome,
};
use reduced_measure::Result;

/// Reduced measures for -Δu + g(u) = μ on desk-scale grids.
///
/// Tolerances in the config can be overridden with REDLAB_TOL, REDLAB_MAX_ITER,
/// REDLAB_SEQ_TOL, REDLAB_GOOD_TOL and REDLAB_EPS_H.
#[derive(Parser, Debug)]
#[command(name = "redlab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, short)]
    config: PathBuf,
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
    /// Replaces the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// One solve with the configured g; writes solution.csv and diagnostics.json.
    Solve(Common),
    /// Reduced measure by the configured scheme; writes levels.csv, u_star.csv, reduced.json.
    Reduce(Common),
    /// Capacity lab over the configured spacings; writes capacity.csv.
    Capacity(Common),
    /// Acceptance suites: apriori, calculus, capacity, reduced, signed, stability, all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parameter sweep of reduce runs; writes sweep.csv and sweep_runtime.json.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn load(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&c.config)?.with_env_overrides()?;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Solve(c) => run_solve(&load(&c)?.build()?, &c.out),
        Cmd::Reduce(c) => run_reduce(&load(&c)?.build()?, &c.out),
        Cmd::Capacity(c) => run_capacity(&load(&c)?.build()?, &c.out),
        Cmd::Verify { suite, out, seed } => run_verify(&suite, seed, &out),
        Cmd::Sweep { common, threads } => {
            if threads == 0 {
                return Err(reduced_measure::Error::Config("--threads must be at least 1".into()));
            }
            run_sweep(&load(&common)?, threads, &common.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(o) => {
            println!("{}", o.message);
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("redlab: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
