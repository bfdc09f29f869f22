use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use greens25::sommerfeld::{sommerfeld_identity_check, SommerfeldCase, SommerfeldError};
use greens25_bench::runner::{format_summary, RunError};
use greens25_bench::{parse_config, run_suite, selftest};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "bench", about = "Convergence benchmarks for 2.5-D Green's function synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the configured cases and write one CSV per case.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write theta-plane maps and the k_rho loci.
        #[arg(long)]
        maps: bool,
    },
    /// Check the Sommerfeld identity on the deformed path.
    Sommerfeld {
        #[arg(long, default_value_t = 0.05)]
        loss: f64,
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// Run the invariant checks.
    Selftest,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, maps } => run(config, out, maps),
        Command::Sommerfeld { loss, n, rho } => sommerfeld(loss, n, rho),
        Command::Selftest => {
            let checks = selftest::run_all();
            for c in &checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().all(|c| c.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NUMERICAL)
            }
        }
    }
}

fn run(config: PathBuf, out: PathBuf, maps: bool) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    cfg.emit_maps |= maps;
    match run_suite(&cfg, &out) {
        Ok(output) => {
            print!("{}", format_summary(&output.summaries));
            for f in &output.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                RunError::Numerical { .. } => ExitCode::from(EXIT_NUMERICAL),
                RunError::Setup { .. } => ExitCode::from(EXIT_CONFIG),
                RunError::Io { .. } => ExitCode::FAILURE,
            }
        }
    }
}

fn sommerfeld(loss: f64, n: usize, rho: f64) -> ExitCode {
    let case = match SommerfeldCase::from_loss(loss, rho, n) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match sommerfeld_identity_check(&case) {
        Ok(r) => {
            println!("pole    {:.12}", case.krho_pole());
            println!("lhs     {:.15e}", r.lhs);
            println!("rhs     {:.15e}", r.rhs);
            println!("rel_err {:.3e}", r.rel_err);
            ExitCode::SUCCESS
        }
        Err(e @ SommerfeldError::InvalidCase(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
