//! `simulate`: build data, evolve, and stream one CSV row per output step.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use gravem::diagnostics::{energy_record, null_sups, DiagnosticsError, ProbeRegion};
use gravem::evolution::{evolve, EvolutionError, GridState, StepperConfig};
use gravem::initial_data::{build_reduced, DataError};
use thiserror::Error;

use crate::config::RunConfig;
use crate::snapshot::Snapshot;

pub const CSV_HEADER: &str =
    "t,energy_k0,energy_k1,energy_k2,gauge_sup,gauge_l2,divB_l2,divD_l2,alphabar_sup,alpha_sup,rho_sup,sigma_sup,F_total_sup";

pub const CSV_NAME: &str = "diagnostics.csv";

/// Highest energy order written to the CSV.
const ENERGY_ORDER: usize = 2;

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("aborted at step 0: initial data: {0}")]
    Data(#[from] DataError),
    #[error("aborted at step {step}: {message}")]
    Aborted { step: usize, message: String },
}

impl From<EvolutionError> for SimulateError {
    fn from(e: EvolutionError) -> Self {
        match e {
            EvolutionError::Aborted { step, source } => SimulateError::Aborted {
                step,
                message: source.to_string(),
            },
            other => SimulateError::Aborted {
                step: 0,
                message: other.to_string(),
            },
        }
    }
}

fn row(state: &GridState, cfg: &RunConfig) -> Result<String, DiagnosticsError> {
    let rec = energy_record(state, &cfg.model, ENERGY_ORDER, &cfg.weights)?;
    let em = state.constitutive_fields(&cfg.model)?;
    let p = null_sups(state, &em, &ProbeRegion::default());
    let values = [
        state.t,
        rec.energy_k[0],
        rec.energy_k[1],
        rec.energy_k[2],
        rec.gauge_sup,
        rec.gauge_l2,
        rec.div_b_l2,
        rec.div_d_l2,
        p.alpha_bar,
        p.alpha,
        p.rho,
        p.sigma,
        p.f_total,
    ];
    // `{:?}` is the shortest string that parses back to the same bits.
    Ok(values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(","))
}

/// Runs the configured evolution; returns the CSV path.
pub fn simulate(cfg: &RunConfig) -> Result<PathBuf, SimulateError> {
    fs::create_dir_all(&cfg.output_path)?;
    let csv_path = cfg.output_path.join(CSV_NAME);
    let mut csv = BufWriter::new(File::create(&csv_path)?);
    writeln!(csv, "{CSV_HEADER}")?;

    let rd = build_reduced(&cfg.family.abstract_data(&cfg.grid), &cfg.model)?;
    let stepper = StepperConfig {
        cfl: cfg.cfl,
        dissipation_eps: cfg.dissipation_eps,
        ..Default::default()
    };
    // The sink cannot return early; the first failure is kept and later samples are skipped.
    let mut failure: Option<SimulateError> = None;
    let mut sink = |step: usize, state: &GridState| {
        if failure.is_some() {
            return;
        }
        let result = row(state, cfg)
            .map_err(|e| SimulateError::Aborted { step, message: e.to_string() })
            .and_then(|line| Ok(writeln!(csv, "{line}")?))
            .and_then(|_| {
                let path = cfg.output_path.join(format!("snapshot_{step:06}.bin"));
                let mut out = BufWriter::new(File::create(path)?);
                Snapshot::of(state).write(&mut out)?;
                Ok(out.flush()?)
            });
        failure = result.err();
    };
    evolve(GridState::from_reduced(&rd), cfg.t_final, &cfg.model, &stepper, cfg.output_every, &mut sink)?;
    if let Some(e) = failure {
        return Err(e);
    }
    csv.flush()?;
    Ok(csv_path)
}
