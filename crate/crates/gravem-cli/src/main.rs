//! `gravem` command line.
//!
//! Exit codes: 0 success, 1 verification failure or too-short fit window, 2 bad input
//! (config, CSV, arguments), 3 runtime abort.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gravem::diagnostics::{DiagnosticsError, Probe};
use gravem::verify::{run_suite, Suite};

use gravem_cli::config::RunConfig;
use gravem_cli::decay_fit::{decay_fit, parse_window, DecayFitError};
use gravem_cli::simulate::simulate;

#[derive(Parser)]
#[command(name = "gravem", version, about = "Coupled Einstein and nonlinear electromagnetic evolution in wave coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured data and write diagnostics.csv plus snapshots.
    Simulate { config: PathBuf },
    /// Run a property suite: identities, stress, commutation, constraints or null.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Fit a power law `t^p` to one probe of a diagnostics CSV.
    DecayFit {
        csv: PathBuf,
        /// alpha_bar, alpha, rho, sigma, F_total, Gamma or good.
        #[arg(long)]
        probe: String,
        /// Fit window `a,b`.
        #[arg(long, value_parser = parse_window)]
        window: (f64, f64),
    },
}

const FAILED: u8 = 1;
const BAD_INPUT: u8 = 2;
const ABORTED: u8 = 3;

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("GRAVEM_THREADS") else { return Ok(()) };
    let n: usize = raw.parse().ok().filter(|n| *n >= 1).ok_or(format!("GRAVEM_THREADS must be a positive integer, found `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn cmd_simulate(path: &Path) -> u8 {
    let cfg = match std::fs::read_to_string(path) {
        Ok(text) => RunConfig::parse(&text),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return BAD_INPUT;
        }
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return BAD_INPUT;
        }
    };
    match simulate(&cfg) {
        Ok(csv) => {
            println!("wrote {}", csv.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            ABORTED
        }
    }
}

fn cmd_verify(suite: &str, trials: usize, seed: u64) -> u8 {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => {
            let names: Vec<_> = Suite::ALL.iter().map(Suite::name).collect();
            eprintln!("error: {e}; expected one of {}", names.join(", "));
            return BAD_INPUT;
        }
    };
    let report = match run_suite(suite, trials, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ABORTED;
        }
    };
    for c in &report.checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} {} {} value={:e} lo={:e} hi={:e}", suite.name(), c.name, c.value, c.lo, c.hi);
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    println!("{verdict} {} trials={trials} seed={seed}", suite.name());
    if report.passed() {
        0
    } else {
        FAILED
    }
}

fn cmd_decay_fit(csv: &Path, probe: &str, window: (f64, f64)) -> u8 {
    let Some(probe) = Probe::from_name(probe) else {
        let names: Vec<_> = Probe::ALL.iter().map(Probe::name).collect();
        eprintln!("error: unknown probe `{probe}`; expected one of {}", names.join(", "));
        return BAD_INPUT;
    };
    match decay_fit(csv, probe, window) {
        Ok(fit) => {
            println!("probe={} window={},{} exponent={} r2={}", probe.name(), window.0, window.1, fit.exponent, fit.r_squared);
            0
        }
        Err(e @ DecayFitError::Fit(DiagnosticsError::WindowTooShort { .. })) => {
            eprintln!("error: {e}");
            FAILED
        }
        Err(e) => {
            eprintln!("error: {}: {e}", csv.display());
            BAD_INPUT
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(BAD_INPUT);
    }
    ExitCode::from(match &cli.command {
        Command::Simulate { config } => cmd_simulate(config),
        Command::Verify { suite, trials, seed } => cmd_verify(suite, *trials, *seed),
        Command::DecayFit { csv, probe, window } => cmd_decay_fit(csv, probe, *window),
    })
}
